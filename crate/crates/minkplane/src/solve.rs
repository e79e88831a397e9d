//! One-dimensional bracketing and bisection shared by the root-analysis and
//! incidence solvers.
//!
//! Every scalar equation in the construction comes with known behaviour at
//! the ends of an open interval, so root finding is a probe ladder (offsets
//! shrinking or growing by factors of 4, at most 64 steps per end) followed
//! by plain bisection. Bisection inherits the intermediate-value arguments
//! the construction rests on; no derivative-based stepping is used.

const STEPS: i32 = 64;

/// Probe points covering the open interval (lo, hi); pass ±∞ for unbounded
/// ends. Points are strictly ascending; finite ends are approached by
/// offsets shrinking by 4, infinite ends by offsets growing by 4 from the
/// opposite anchor (or from 0 when both ends are infinite).
pub(crate) fn ladder(lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let span = hi - lo;
            let mut v = Vec::with_capacity(2 * STEPS as usize + 1);
            for k in (1..=STEPS).rev() {
                v.push(lo + span * 0.25_f64.powi(k));
            }
            v.push(lo + 0.5 * span);
            for k in 1..=STEPS {
                v.push(hi - span * 0.25_f64.powi(k));
            }
            v
        }
        (true, false) => (-STEPS..=STEPS).map(|k| lo + 4.0_f64.powi(k)).collect(),
        (false, true) => (-STEPS..=STEPS)
            .rev()
            .map(|k| hi - 4.0_f64.powi(k))
            .collect(),
        (false, false) => {
            let mut v: Vec<f64> = (-STEPS..=STEPS).rev().map(|k| -(4.0_f64.powi(k))).collect();
            v.push(0.0);
            v.extend((-STEPS..=STEPS).map(|k| 4.0_f64.powi(k)));
            v
        }
    };
    v.retain(|x| x.is_finite() && *x > lo && *x < hi);
    v.dedup();
    v
}

/// First adjacent pair of ladder points with a strict sign change of g.
/// NaN values are skipped, ±∞ values carry a usable sign, and exact zeros
/// are skipped as well: a zero at a far ladder point is usually underflow
/// (the function's own limit), while a genuine root between two probes
/// still shows up as a sign change around it.
pub(crate) fn find_bracket<F: Fn(f64) -> f64>(g: &F, points: &[f64]) -> Option<(f64, f64)> {
    let mut prev: Option<(f64, f64)> = None;
    for &x in points {
        let v = g(x);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                return Some((px, x));
            }
        }
        prev = Some((x, v));
    }
    None
}

/// Bisects a sign-change bracket down to f64 resolution and returns the
/// endpoint with the smaller |g|.
pub(crate) fn bisect<F: Fn(f64) -> f64>(g: &F, bracket: (f64, f64)) -> f64 {
    let (mut lo, mut hi) = bracket;
    if lo == hi {
        return lo;
    }
    let mut glo = g(lo);
    let mut ghi = g(hi);
    if glo == 0.0 {
        return lo;
    }
    if ghi == 0.0 {
        return hi;
    }
    debug_assert!((glo > 0.0) != (ghi > 0.0), "not a bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.is_nan() {
            break;
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    if glo.abs() <= ghi.abs() {
        lo
    } else {
        hi
    }
}

/// Finds some root of g on the open interval (lo, hi) by ladder scan and
/// bisection; `None` when no sign change is visible on the ladder.
pub(crate) fn solve_any<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Option<f64> {
    let bracket = find_bracket(g, &ladder(lo, hi))?;
    Some(bisect(g, bracket))
}

/// All roots visible on the ladder: every sign-change bracket is bisected.
/// Used by uniqueness checks that must look for spurious extra solutions.
pub(crate) fn solve_all<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Vec<f64> {
    let points = ladder(lo, hi);
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in &points {
        let v = g(x);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                roots.push(bisect(g, (px, x)));
            }
        }
        prev = Some((x, v));
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_is_ascending_and_interior() {
        for (lo, hi) in [
            (0.0, 1.0),
            (-2.0, 7.0),
            (3.0, f64::INFINITY),
            (f64::NEG_INFINITY, -1.5),
            (f64::NEG_INFINITY, f64::INFINITY),
        ] {
            let l = ladder(lo, hi);
            assert!(!l.is_empty());
            for w in l.windows(2) {
                assert!(w[0] < w[1], "not ascending in ({lo}, {hi})");
            }
            assert!(l.iter().all(|&x| x > lo && x < hi));
        }
    }

    #[test]
    fn solves_simple_roots() {
        let r = solve_any(&|x: f64| x * x - 2.0, 0.0, f64::INFINITY).unwrap();
        assert!((r - 2.0_f64.sqrt()).abs() < 1e-12);

        let r = solve_any(&|x: f64| x.exp() - 3.0, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((r - 3.0_f64.ln()).abs() < 1e-12);

        assert!(solve_any(&|x: f64| x * x + 1.0, f64::NEG_INFINITY, f64::INFINITY).is_none());
    }

    #[test]
    fn finds_multiple_roots() {
        let g = |x: f64| (x - 1.5) * (x - 5.0);
        let roots = solve_all(&g, 0.0, f64::INFINITY);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.5).abs() < 1e-12 && (roots[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn root_exactly_on_a_probe_point_is_still_found() {
        // 4 is a ladder point; the exact zero there is skipped but the
        // bracket across it survives.
        let g = |x: f64| x - 4.0;
        let r = solve_any(&g, 0.0, f64::INFINITY).unwrap();
        assert_eq!(r, 4.0);
    }

    #[test]
    fn infinite_probe_values_carry_sign() {
        // g blows up at the left end but the bracket is still found.
        let g = |x: f64| 1.0 / x - 2.0;
        let r = solve_any(&g, 0.0, f64::INFINITY).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
    }
}
