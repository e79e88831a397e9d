//! The acceptance suite: nine reproducible criteria exercising the function
//! checker, the incidence solvers, the root-structure case table, and the
//! classifiers, each with pinned tolerances and seeds. The CLI `accept`
//! command and the `acceptance` integration test both run through here and
//! print one pass/fail line per criterion.

use crate::circles::{Circle, PlaneSpec};
use crate::classify::{
    classify_plane, isomorphic, normalise, rescale_plane, KleinKrollType,
};
use crate::functions::{check_strongly_hyperbolic, CheckerConfig, ShFunction};
use crate::incidence::{
    circle_distance, concircular_four, intersect, join, point_close, touch_candidates,
};
use crate::roots::{verify_case_table, CaseTableConfig};
use crate::rng::SplitMix64;
use crate::sampling;
use crate::torus::{self, AdmissibleType, ExtendedReal, Half, TorusPoint};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} ({}): {} [{:.1}s] {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

pub fn plane_classical() -> PlaneSpec {
    PlaneSpec::classical()
}

pub fn plane_hartmann2() -> PlaneSpec {
    let h = ShFunction::hartmann_power(2.0).expect("valid exponent");
    PlaneSpec::new(h.clone(), h.clone(), h.clone(), h)
}

pub fn plane_mixed() -> PlaneSpec {
    PlaneSpec::new(
        ShFunction::ReciprocalXPlusArctan,
        ShFunction::ArcsinhReciprocal,
        ShFunction::reciprocal_power_sum(3).expect("valid order"),
        ShFunction::reciprocal_power(1).expect("valid exponent"),
    )
}

fn test_planes() -> [PlaneSpec; 3] {
    [plane_classical(), plane_hartmann2(), plane_mixed()]
}

fn finish(id: u8, name: &str, start: Instant, pass: bool, detail: String) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_owned(),
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 1: every catalog function passes the checker with the default
/// config; 1/sinh fails condition 3 with shift ratio e⁻¹ at horizon 30.
pub fn criterion1() -> CriterionResult {
    let start = Instant::now();
    let cfg = CheckerConfig::default();
    let catalog = [
        ShFunction::ReciprocalPower { i: 1 },
        ShFunction::ReciprocalPower { i: 2 },
        ShFunction::ReciprocalPower { i: 3 },
        ShFunction::ReciprocalPowerSum { n: 2 },
        ShFunction::ReciprocalPowerSum { n: 3 },
        ShFunction::ReciprocalXPlusArctan,
        ShFunction::ArcsinhReciprocal,
        ShFunction::HartmannPower { r: 2.5 },
    ];
    let mut pass = true;
    let mut detail = String::new();
    for f in &catalog {
        match check_strongly_hyperbolic(f, &cfg) {
            Ok(rep) if rep.overall => {}
            other => {
                pass = false;
                detail.push_str(&format!("{} failed: {other:?}; ", f.name()));
            }
        }
    }
    let sinh_cfg = CheckerConfig {
        grid_min: 1e-4,
        grid_max: 30.0,
        grid_points: 256,
        limit_b_values: vec![1.0],
        tolerance: 1e-3,
    };
    match check_strongly_hyperbolic(&ShFunction::ReciprocalSinh, &sinh_cfg) {
        Ok(rep) => {
            let ratio = rep.limit_ratios.first().map(|l| l.ratio).unwrap_or(f64::NAN);
            let expect = (-1.0_f64).exp();
            if rep.conditions[2].pass || !((ratio - expect).abs() <= 1e-4) {
                pass = false;
            }
            detail.push_str(&format!(
                "1/sinh shift ratio at X=30: {ratio:.7} (e^-1 = {expect:.7})"
            ));
        }
        Err(e) => {
            pass = false;
            detail.push_str(&format!("1/sinh check errored: {e}"));
        }
    }
    let ok_time = start.elapsed().as_secs_f64() < 5.0;
    finish(1, "catalog validation", start, pass && ok_time, detail)
}

const ALL_TYPES: [AdmissibleType; 5] = [
    AdmissibleType::Type1,
    AdmissibleType::Type2,
    AdmissibleType::Type3,
    AdmissibleType::Type4,
    AdmissibleType::Type5,
];

/// Criterion 2: joining existence over three planes and all five admissible
/// types, 2000 triples each, residuals below 1e−6.
pub fn criterion2() -> CriterionResult {
    let start = Instant::now();
    let mut failures = 0u64;
    let mut worst = 0.0_f64;
    let mut first_failure = String::new();
    for (pi, plane) in test_planes().iter().enumerate() {
        for (ki, kind) in ALL_TYPES.iter().enumerate() {
            let mut rng = SplitMix64::new(0x2000 + (pi as u64) * 16 + ki as u64);
            for _ in 0..2000 {
                let pts = sampling::triple_of_type(&mut rng, *kind);
                match join(plane, pts[0], pts[1], pts[2]) {
                    Ok(sol) => {
                        let r = sol.residuals.iter().cloned().fold(0.0, f64::max);
                        worst = worst.max(r);
                        if !(r < 1e-6) {
                            failures += 1;
                            if first_failure.is_empty() {
                                first_failure =
                                    format!("residual {r} on plane {pi} type {kind:?} {pts:?}");
                            }
                        }
                    }
                    Err(e) => {
                        failures += 1;
                        if first_failure.is_empty() {
                            first_failure = format!("{e} on plane {pi} {pts:?}");
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 60.0;
    finish(
        2,
        "joining existence",
        start,
        pass,
        format!("30000 joins, worst residual {worst:.3e}, {failures} failures {first_failure}"),
    )
}

/// Independent same-half intersection counter: exact comparison of the
/// infinite points plus a chart-uniform sign scan of the graph difference
/// between branch poles.
fn scan_count_same_half(plane: &PlaneSpec, c: &Circle, d: &Circle, n: usize) -> usize {
    let mut count = 0usize;
    match (*c, *d) {
        (Circle::NegCurve { b: b1, c: c1, .. }, Circle::NegCurve { b: b2, c: c2, .. })
        | (Circle::PosCurve { b: b1, c: c1, .. }, Circle::PosCurve { b: b2, c: c2, .. }) => {
            if b1 == b2 {
                count += 1;
            }
            if c1 == c2 {
                count += 1;
            }
        }
        (Circle::NegLine { .. }, Circle::NegLine { .. })
        | (Circle::PosLine { .. }, Circle::PosLine { .. }) => {
            count += 1; // shared (∞, ∞)
        }
        _ => {}
    }
    let mut breaks = vec![0.0, 1.0];
    for k in [c, d] {
        if let Circle::NegCurve { b, .. } = *k {
            breaks.push(chart(-b));
        }
        if let Circle::PosCurve { b, .. } = *k {
            breaks.push(chart(b));
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let segments = breaks.len() - 1;
    let per_segment = (n / segments).max(16);
    for w in breaks.windows(2) {
        let (ua, ub) = (w[0], w[1]);
        let mut prev = 0.0_f64;
        for j in 1..per_segment {
            let u = ua + (ub - ua) * j as f64 / per_segment as f64;
            let x = ExtendedReal::Finite(unchart(u));
            let (yc, yd) = (plane.eval_circle(c, x), plane.eval_circle(d, x));
            let delta = match (yc, yd) {
                (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a - b,
                (ExtendedReal::Infinity, ExtendedReal::Finite(_)) => f64::INFINITY,
                (ExtendedReal::Finite(_), ExtendedReal::Infinity) => f64::NEG_INFINITY,
                _ => continue,
            };
            if delta == 0.0 || delta.is_nan() {
                continue;
            }
            if prev != 0.0 && (prev > 0.0) != (delta > 0.0) {
                count += 1;
            }
            prev = delta;
        }
    }
    count
}

fn chart(t: f64) -> f64 {
    (2.0 * t.atan() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
}

fn unchart(u: f64) -> f64 {
    (std::f64::consts::PI * (u - 0.5)).tan()
}

/// Criterion 3: joining uniqueness. Concircular quadruples give matching
/// circles; same-half pair intersections stay ≤ 2 and agree with the
/// 10⁵-point scan oracle.
pub fn criterion3() -> CriterionResult {
    let start = Instant::now();
    let planes = test_planes();
    let mut failures = 0u64;
    let mut first = String::new();
    let fail = |msg: String, failures: &mut u64, first: &mut String| {
        *failures += 1;
        if first.is_empty() {
            *first = msg;
        }
    };

    let mut rng = SplitMix64::new(0x3000);
    let mut done = 0u64;
    while done < 2000 {
        let plane = &planes[(done % 3) as usize];
        if let Some((_, four)) = concircular_four(plane, &mut rng) {
            done += 1;
            let s1 = join(plane, four[0], four[1], four[2]);
            let s2 = join(plane, four[1], four[2], four[3]);
            match (s1, s2) {
                (Ok(s1), Ok(s2)) => {
                    let dist = circle_distance(&s1.circle, &s2.circle);
                    if !(dist <= 1e-8) {
                        fail(
                            format!("concircular joins differ by {dist}"),
                            &mut failures,
                            &mut first,
                        );
                    }
                }
                (a, b) => fail(
                    format!("concircular join failed: {a:?} {b:?}"),
                    &mut failures,
                    &mut first,
                ),
            }
        }
    }

    let mut rng = SplitMix64::new(0x3001);
    let mut pairs = 0u64;
    while pairs < 5000 {
        let plane = &planes[(pairs % 3) as usize];
        let half = if rng.chance(0.5) { Half::Neg } else { Half::Pos };
        let c1 = sampling::circle_of_half(&mut rng, half);
        let c2 = sampling::circle_of_half(&mut rng, half);
        if c1 == c2 {
            continue;
        }
        pairs += 1;
        match intersect(plane, &c1, &c2) {
            Ok(set) => {
                if set.points.len() > 2 {
                    fail(
                        format!("{} intersections for {c1:?} vs {c2:?}", set.points.len()),
                        &mut failures,
                        &mut first,
                    );
                }
                let scanned = scan_count_same_half(plane, &c1, &c2, 100_000);
                if scanned != set.points.len() {
                    fail(
                        format!(
                            "scan oracle {scanned} vs intersect {} for {c1:?} vs {c2:?}",
                            set.points.len()
                        ),
                        &mut failures,
                        &mut first,
                    );
                }
            }
            Err(e) => fail(format!("intersect failed: {e}"), &mut failures, &mut first),
        }
    }
    finish(
        3,
        "joining uniqueness",
        start,
        failures == 0,
        format!("2000 quadruples + 5000 pairs, {failures} failures {first}"),
    )
}

/// Criterion 4: touching over all four case families; the tangent circle
/// meets C exactly at p and no second solution survives re-solving.
pub fn criterion4() -> CriterionResult {
    let start = Instant::now();
    let planes = test_planes();
    let mut failures = 0u64;
    let mut first = String::new();
    let mut configs = 0u64;
    for family in 0..4u8 {
        let mut rng = SplitMix64::new(0x4000 + family as u64);
        let mut done = 0;
        while done < 500 {
            let plane = &planes[(done % 3) as usize];
            let Some((k, p, q)) = touch_family_config(plane, &mut rng, family) else {
                continue;
            };
            done += 1;
            configs += 1;
            match touch_candidates(plane, &k, p, q) {
                Ok(cands) => {
                    let d = cands[0];
                    let set = match intersect(plane, &k, &d) {
                        Ok(set) => set,
                        Err(e) => {
                            failures += 1;
                            if first.is_empty() {
                                first = format!("intersect failed: {e}");
                            }
                            continue;
                        }
                    };
                    let exact = set.points.len() == 1 && point_close(set.points[0], p, 1e-6);
                    if !exact || !plane.contains(&d, q, 1e-6) {
                        failures += 1;
                        if first.is_empty() {
                            first = format!(
                                "family {family}: C ∩ D = {:?} (expected {p}), C = {k:?}, q = {q}",
                                set.points
                            );
                        }
                        continue;
                    }
                    for cand in &cands[1..] {
                        if circle_distance(cand, &d) <= 1e-8 {
                            continue;
                        }
                        let second = plane.contains(cand, q, 1e-6)
                            && matches!(
                                intersect(plane, &k, cand),
                                Ok(s) if s.points.len() == 1 && point_close(s.points[0], p, 1e-6)
                            );
                        if second {
                            failures += 1;
                            if first.is_empty() {
                                first = format!("family {family}: second tangent {cand:?}");
                            }
                        }
                    }
                }
                Err(e) => {
                    failures += 1;
                    if first.is_empty() {
                        first = format!("family {family}: touch failed {e} (C={k:?} p={p} q={q})");
                    }
                }
            }
        }
    }
    finish(
        4,
        "touching existence and uniqueness",
        start,
        failures == 0,
        format!("{configs} configurations, {failures} failures {first}"),
    )
}

/// One touch configuration of the requested family: 0 = p at (∞, ∞) on a
/// line, 1 = p at the branch point, 2 = p at the centre height (∞, c),
/// 3 = p finite.
fn touch_family_config(
    plane: &PlaneSpec,
    rng: &mut SplitMix64,
    family: u8,
) -> Option<(Circle, TorusPoint, TorusPoint)> {
    let half = if rng.chance(0.5) { Half::Neg } else { Half::Pos };
    let inf = ExtendedReal::Infinity;
    let (k, p) = match family {
        0 => {
            let k = sampling::line_of_half(rng, half);
            (k, TorusPoint::infinity())
        }
        1 => {
            let k = sampling::curve_of_half(rng, half);
            let p = k.infinite_points()[0];
            (k, p)
        }
        2 => {
            let k = sampling::curve_of_half(rng, half);
            let p = k.infinite_points()[1];
            (k, p)
        }
        _ => {
            let k = sampling::circle_of_half(rng, half);
            let p = sampling::point_on_circle(plane, rng, &k);
            if !p.x.is_finite() || !p.y.is_finite() {
                return None;
            }
            if let ExtendedReal::Finite(v) = p.y {
                if v.abs() > 1e4 {
                    return None;
                }
            }
            (k, p)
        }
    };
    let _ = inf;
    for _ in 0..40 {
        let q = sampling::general_point(rng);
        if torus::parallel(p, q) || plane.contains(&k, q, 1e-4) {
            continue;
        }
        let sep = |a: ExtendedReal, b: ExtendedReal| match (a, b) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                (a - b).abs() > sampling::MIN_SEP
            }
            _ => true,
        };
        if sep(p.x, q.x) && sep(p.y, q.y) {
            return Some((k, p, q));
        }
    }
    None
}

/// Criterion 5: joins on the classical plane match the closed-form
/// three-point solver of (x − b)(y − c) = a.
pub fn criterion5() -> CriterionResult {
    let start = Instant::now();
    let plane = plane_classical();
    let mut rng = SplitMix64::new(0x5000);
    let mut failures = 0u64;
    let mut worst = 0.0_f64;
    let mut first = String::new();
    for _ in 0..1000 {
        let pts = sampling::triple_of_type(&mut rng, AdmissibleType::Type5);
        let fin = |e: ExtendedReal| e.finite().expect("finite");
        let coords = [
            (fin(pts[0].x), fin(pts[0].y)),
            (fin(pts[1].x), fin(pts[1].y)),
            (fin(pts[2].x), fin(pts[2].y)),
        ];
        let Some(oracle) = classical_three_point(coords) else {
            continue;
        };
        match join(&plane, pts[0], pts[1], pts[2]) {
            Ok(sol) => {
                let got = match sol.circle {
                    Circle::NegCurve { a, b, c } => (a, -b, c),
                    Circle::PosCurve { a, b, c } => (-a, b, c),
                    _ => {
                        // Collinear triples never occur with random reals.
                        continue;
                    }
                };
                let rel = |p: f64, q: f64| (p - q).abs() / (1.0 + p.abs().max(q.abs()));
                let dist = rel(got.0, oracle.0)
                    .max(rel(got.1, oracle.1))
                    .max(rel(got.2, oracle.2));
                worst = worst.max(dist);
                if !(dist < 1e-8) {
                    failures += 1;
                    if first.is_empty() {
                        first = format!("{dist:.3e} for {pts:?}: {got:?} vs {oracle:?}");
                    }
                }
            }
            Err(e) => {
                failures += 1;
                if first.is_empty() {
                    first = format!("join failed: {e}");
                }
            }
        }
    }
    finish(
        5,
        "classical closed-form oracle",
        start,
        failures == 0,
        format!("1000 triples, worst disagreement {worst:.3e} {first}"),
    )
}

/// Closed-form solver for (x − b)(y − c) = a through three finite points:
/// two pairwise-differenced equations are linear in (b, c).
fn classical_three_point(p: [(f64, f64); 3]) -> Option<(f64, f64, f64)> {
    let [(x1, y1), (x2, y2), (x3, y3)] = p;
    let m = [[y1 - y2, x1 - x2], [y2 - y3, x2 - x3]];
    let rhs = [x1 * y1 - x2 * y2, x2 * y2 - x3 * y3];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 {
        return None;
    }
    let b = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let c = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
    let a = (x1 - b) * (y1 - c);
    Some((a, b, c))
}

/// Criterion 6: the root-structure case table over two function pairs,
/// 10⁴ trials total, zero clause violations and zero scan disagreements
/// (full 10⁶-point scans every tenth trial, 2·10⁴-point scans otherwise).
pub fn criterion6() -> CriterionResult {
    let start = Instant::now();
    let recip = ShFunction::ReciprocalPower { i: 1 };
    let arctan = ShFunction::ReciprocalXPlusArctan;
    let mut detail = String::new();
    let mut pass = true;
    for (name, f, seed) in [
        ("reciprocal", &recip, 0x6000u64),
        ("x+arctan", &arctan, 0x6001),
    ] {
        let report = verify_case_table(
            f,
            f,
            &CaseTableConfig {
                trials: 5000,
                seed,
                scan_points: 1_000_000,
                scan_stride: 10,
                light_scan_points: 20_000,
            },
        );
        if !report.ok() {
            pass = false;
            detail.push_str(&format!(
                "{name}: {} violations, first: {:?}; ",
                report.violations.len(),
                report.violations.first()
            ));
        } else {
            detail.push_str(&format!("{name}: 5000 trials clean; "));
        }
    }
    finish(6, "root-structure case table", start, pass, detail)
}

/// Criterion 7: the classification matrix of the group-dimension and
/// Klein-Kroll theorems.
pub fn criterion7() -> CriterionResult {
    let start = Instant::now();
    let h2 = ShFunction::hartmann_power(2.0).expect("valid exponent");
    let cases: [(&str, PlaneSpec, u8, KleinKrollType); 4] = [
        ("classical", plane_classical(), 6, KleinKrollType::ViiF23),
        ("hartmann(2)", plane_hartmann2(), 4, KleinKrollType::IiiC19),
        (
            "hartmann(2) s1=2",
            PlaneSpec::new(
                h2.clone(),
                ShFunction::scaled(0.5, h2.clone()),
                h2.clone(),
                h2.clone(),
            ),
            4,
            KleinKrollType::IiiC1,
        ),
        ("mixed", normalise(&plane_mixed()), 3, KleinKrollType::IiiC1),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, plane, dim, kk) in cases {
        match classify_plane(&plane) {
            Ok(rep) if rep.group_dimension == dim && rep.klein_kroll == kk => {
                detail.push_str(&format!("{name} -> ({dim}, {kk:?}); "));
            }
            other => {
                pass = false;
                detail.push_str(&format!("{name}: expected ({dim}, {kk:?}), got {other:?}; "));
            }
        }
    }
    finish(7, "classification matrix", start, pass, detail)
}

/// Criterion 8: a plane and its rescaling by r = 2 are detected isomorphic
/// with the scaling recovered; the classical and mixed planes are rejected
/// after the full transform sweep.
pub fn criterion8() -> CriterionResult {
    let start = Instant::now();
    let f = normalise(&plane_mixed());
    let g = rescale_plane(&f, 2.0);
    let mut pass = true;
    let mut detail = String::new();
    match isomorphic(&f, &g) {
        Ok(Some(w)) => {
            if (w.r - 2.0).abs() <= 1e-6 {
                detail.push_str(&format!(
                    "recovered r = {:.9} via {:?}, residual {:.2e}; ",
                    w.r, w.transform, w.residual
                ));
            } else {
                pass = false;
                detail.push_str(&format!("wrong r = {}; ", w.r));
            }
        }
        other => {
            pass = false;
            detail.push_str(&format!("no witness: {other:?}; "));
        }
    }
    let classical = plane_classical();
    match (isomorphic(&classical, &f), isomorphic(&f, &classical)) {
        (Ok(None), Ok(None)) => detail.push_str("classical vs mixed rejected both ways"),
        other => {
            pass = false;
            detail.push_str(&format!("unexpected witness: {other:?}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    finish(8, "isomorphism detection", start, pass && secs < 10.0, detail)
}

/// Criterion 9: Φ∞-equivariance and permutation invariance of join on 10³
/// random instances within 1e−8.
pub fn criterion9() -> CriterionResult {
    let start = Instant::now();
    let planes = [plane_classical(), plane_mixed()];
    let mut rng = SplitMix64::new(0x9000);
    let mut failures = 0u64;
    let mut first = String::new();
    for trial in 0..1000u64 {
        let plane = &planes[(trial % 2) as usize];
        let pts = sampling::admissible_triple(&mut rng);
        let base = match join(plane, pts[0], pts[1], pts[2]) {
            Ok(s) => s,
            Err(e) => {
                failures += 1;
                if first.is_empty() {
                    first = format!("join failed: {e}");
                }
                continue;
            }
        };
        // Permutation invariance.
        let perm = join(plane, pts[2], pts[0], pts[1]).map(|s| s.circle);
        // Φ∞ equivariance.
        let (scale, shift, offset) = (
            rng.log_uniform(0.3, 3.0),
            rng.uniform(-2.0, 2.0),
            rng.uniform(-2.0, 2.0),
        );
        let map = |p: TorusPoint| {
            TorusPoint::new(
                match p.x {
                    ExtendedReal::Finite(v) => ExtendedReal::Finite(v + shift),
                    ExtendedReal::Infinity => ExtendedReal::Infinity,
                },
                match p.y {
                    ExtendedReal::Finite(v) => ExtendedReal::Finite(scale * v + offset),
                    ExtendedReal::Infinity => ExtendedReal::Infinity,
                },
            )
        };
        let moved = join(plane, map(pts[0]), map(pts[1]), map(pts[2])).map(|s| s.circle);
        let expected = base.circle.apply_phi_infinity(scale, shift, offset);
        let ok = matches!(&perm, Ok(c) if circle_distance(c, &base.circle) <= 1e-8)
            && matches!(&moved, Ok(c) if circle_distance(c, &expected) <= 1e-8);
        if !ok {
            failures += 1;
            if first.is_empty() {
                first = format!("perm {perm:?} moved {moved:?} expected {expected:?} for {pts:?}");
            }
        }
    }
    finish(
        9,
        "equivariance and permutation invariance",
        start,
        failures == 0,
        format!("1000 instances, {failures} failures {first}"),
    )
}

pub fn run(id: u8) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(|id| run(id).expect("known id")).collect()
}
