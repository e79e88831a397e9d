//! Root structure of the difference functions of two circle generators.
//!
//! For parameters a₁, a₂ > 0 and b₁, b₂, c₁, c₂ the two differences are
//!
//! ```text
//! check(x) = a₁·f₁(x+b₁) + c₁ − a₂·f₁(x+b₂) − c₂   on (max{−b₁,−b₂}, ∞)
//! hat(x)   = −a₁·f₂(−x−b₁) + c₁ + a₂·f₂(−x−b₂) − c₂ on (−∞, min{−b₁,−b₂})
//! ```
//!
//! i.e. the convex-convex and concave-concave branch differences of two
//! circles. Both reduce, by an affine substitution, to the one-function form
//! d(z) = a·f(z+b) + c − f(z) on (max{−b, 0}, ∞), whose root count is at
//! most two: the derivative has at most one (sign-changing) root because
//! ln|f′| is strictly convex and strictly decreasing, so d splits into at
//! most two monotone pieces with known limits at the ends. These counts are
//! what bound circle-pair intersections and drive the touching solver.

use crate::functions::{invert, ShFunction};
use crate::rng::SplitMix64;
use crate::solve;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffKind {
    Check,
    Hat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffParams {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
}

impl DiffParams {
    fn validate(&self) -> Result<(), RootError> {
        let all = [self.a1, self.b1, self.c1, self.a2, self.b2, self.c2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(RootError::InvalidParams("non-finite parameter".into()));
        }
        if self.a1 <= 0.0 || self.a2 <= 0.0 {
            return Err(RootError::InvalidParams(format!(
                "a1, a2 must be positive, got {} and {}",
                self.a1, self.a2
            )));
        }
        if (self.a1, self.b1, self.c1) == (self.a2, self.b2, self.c2) {
            return Err(RootError::InvalidParams(
                "the two parameter triples coincide".into(),
            ));
        }
        Ok(())
    }
}

/// A difference function together with its generator. `Check` differences
/// use f₁, `Hat` differences use f₂.
#[derive(Clone, Debug)]
pub struct DiffFunction<'f> {
    pub kind: DiffKind,
    pub params: DiffParams,
    pub f: &'f ShFunction,
}

impl<'f> DiffFunction<'f> {
    pub fn check(params: DiffParams, f1: &'f ShFunction) -> Result<Self, RootError> {
        params.validate()?;
        Ok(DiffFunction {
            kind: DiffKind::Check,
            params,
            f: f1,
        })
    }

    pub fn hat(params: DiffParams, f2: &'f ShFunction) -> Result<Self, RootError> {
        params.validate()?;
        Ok(DiffFunction {
            kind: DiffKind::Hat,
            params,
            f: f2,
        })
    }

    /// Open domain of definition; one end is infinite.
    pub fn domain(&self) -> (f64, f64) {
        let p = &self.params;
        match self.kind {
            DiffKind::Check => ((-p.b1).max(-p.b2), f64::INFINITY),
            DiffKind::Hat => (f64::NEG_INFINITY, (-p.b1).min(-p.b2)),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.kind {
            DiffKind::Check => {
                p.a1 * self.f.eval(x + p.b1) + p.c1 - p.a2 * self.f.eval(x + p.b2) - p.c2
            }
            DiffKind::Hat => {
                -p.a1 * self.f.eval(-x - p.b1) + p.c1 + p.a2 * self.f.eval(-x - p.b2) - p.c2
            }
        }
    }

    /// Reduction to the one-function form d(z) = a·f(z+b) + c − f(z) and the
    /// map carrying reduced roots back to x.
    fn reduced(&self) -> Reduced<'f> {
        let p = &self.params;
        match self.kind {
            // z = x + b2, check = a2·d(z)
            DiffKind::Check => Reduced {
                a: p.a1 / p.a2,
                b: p.b1 - p.b2,
                c: (p.c1 - p.c2) / p.a2,
                f: self.f,
                to_x: ToX {
                    scale: 1.0,
                    offset: -p.b2,
                },
            },
            // z = −x − b2, hat = −a2·d(z)
            DiffKind::Hat => Reduced {
                a: p.a1 / p.a2,
                b: p.b2 - p.b1,
                c: (p.c2 - p.c1) / p.a2,
                f: self.f,
                to_x: ToX {
                    scale: -1.0,
                    offset: -p.b2,
                },
            },
        }
    }
}

#[derive(Clone, Copy)]
struct ToX {
    scale: f64,
    offset: f64,
}

impl ToX {
    fn map(&self, z: f64) -> f64 {
        self.scale * z + self.offset
    }
}

struct Reduced<'f> {
    a: f64,
    b: f64,
    c: f64,
    f: &'f ShFunction,
    to_x: ToX,
}

impl Reduced<'_> {
    fn left(&self) -> f64 {
        (-self.b).max(0.0)
    }

    fn eval(&self, z: f64) -> f64 {
        self.a * self.f.eval(z + self.b) + self.c - self.f.eval(z)
    }

    /// Strictly monotone auxiliary whose root is the root of d′:
    /// h(z) = ln|f′(z+b)| + ln a − ln|f′(z)|.
    fn h(&self, z: f64) -> f64 {
        (-self.f.deriv(z + self.b)).ln() + self.a.ln() - (-self.f.deriv(z)).ln()
    }

    /// Sign of d as z approaches the left end of the domain.
    fn left_sign(&self) -> f64 {
        if self.b > 0.0 {
            -1.0 // f(z) → +∞ dominates
        } else if self.b < 0.0 {
            1.0 // a·f(z+b) → +∞ dominates
        } else {
            (self.a - 1.0).signum() // (a−1)·f(z) → ±∞
        }
    }

    /// Sign of d as z → ∞, where d → c (and, for c = 0, the slower decay
    /// governs the sign of the tail).
    fn tail_sign(&self) -> f64 {
        if self.c != 0.0 {
            self.c.signum()
        } else if self.a != 1.0 {
            (self.a - 1.0).signum()
        } else {
            -self.b.signum()
        }
    }

    fn critical_point(&self) -> Option<f64> {
        if self.b == 0.0 {
            return None; // h is the constant ln a
        }
        let lo = self.left();
        let bracket = solve::find_bracket(&|z| self.h(z), &solve::ladder(lo, f64::INFINITY))?;
        Some(solve::bisect(&|z| self.h(z), bracket))
    }

    /// Root of d on a monotone piece (lo, hi) whose end signs are known.
    /// `None` when the signs agree; an error when they differ but no bracket
    /// is visible on the probe ladder.
    fn piece_root(&self, lo: f64, hi: f64, s_lo: f64, s_hi: f64) -> Result<Option<f64>, RootError> {
        if s_lo == s_hi {
            return Ok(None);
        }
        match solve::find_bracket(&|z| self.eval(z), &solve::ladder(lo, hi)) {
            Some(br) => Ok(Some(solve::bisect(&|z| self.eval(z), br))),
            None => Err(RootError::NoConvergence(format!(
                "monotone piece ({lo}, {hi}) has opposite end signs but no visible sign change"
            ))),
        }
    }

    fn describe(&self) -> String {
        let rel = |v: f64, name: &str| {
            if v > 0.0 {
                format!("{name}>0")
            } else if v < 0.0 {
                format!("{name}<0")
            } else {
                format!("{name}=0")
            }
        };
        format!(
            "{},{},{}",
            rel(self.a - 1.0, "a-1"),
            rel(self.b, "b"),
            rel(self.c, "c")
        )
    }
}

/// One located root of a difference function.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RootInfo {
    pub location: f64,
    pub sign_change: bool,
    pub derivative_zero: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<RootInfo>,
    pub count: usize,
    pub case_label: String,
}

/// A root this close to annihilating the difference on a whole neighbourhood
/// is classified as a tangency (the non-transversal case); exact tangency is
/// measure-zero, so a tolerance band is the only workable reading.
const TANGENT_TOL: f64 = 1e-13;

/// Unique root of the derivative of the difference, located through the
/// strictly monotone auxiliary h by bracket expansion and bisection;
/// `None` when h has constant sign on the probed range.
pub fn critical_point(d: &DiffFunction) -> Result<Option<f64>, RootError> {
    d.params.validate()?;
    let r = d.reduced();
    Ok(r.critical_point().map(|z| r.to_x.map(z)))
}

/// Full root analysis: splits the domain at the critical point when one
/// exists, decides existence on each monotone piece from the end signs, and
/// locates roots by bisection. The case label records which clause of the
/// root-structure case analysis applied, in reduced (a, b, c) form.
pub fn analyze_roots(d: &DiffFunction) -> Result<RootReport, RootError> {
    d.params.validate()?;
    let r = d.reduced();
    let (mut roots, outcome) = analyze_reduced(&r)?;
    // Map back to x; the Hat substitution reverses orientation.
    for root in &mut roots {
        root.location = r.to_x.map(root.location);
    }
    roots.sort_by(|p, q| p.location.total_cmp(&q.location));
    debug_assert!(roots.len() <= 2);
    if roots.len() == 2 {
        debug_assert!(roots.iter().all(|r| r.sign_change && !r.derivative_zero));
    }
    Ok(RootReport {
        count: roots.len(),
        case_label: format!("{}; {}", r.describe(), outcome),
        roots,
    })
}

fn analyze_reduced(r: &Reduced) -> Result<(Vec<RootInfo>, &'static str), RootError> {
    // Constant difference: a = 1, b = 0 leaves d ≡ c ≠ 0.
    if r.a == 1.0 && r.b == 0.0 {
        return Ok((Vec::new(), "constant difference, no roots"));
    }
    // b = 0: d = (a−1)·f(z) + c is monotone in f; solve by inversion.
    if r.b == 0.0 {
        let target = -r.c / (r.a - 1.0);
        if target <= 0.0 {
            let outcome = if r.c == 0.0 {
                "pure scaling, no roots"
            } else {
                "offset only, no roots"
            };
            return Ok((Vec::new(), outcome));
        }
        let z = invert(r.f, target)
            .map_err(|e| RootError::NoConvergence(format!("inverting offset-only case: {e}")))?;
        return Ok((
            vec![RootInfo {
                location: z,
                sign_change: true,
                derivative_zero: false,
            }],
            "offset only, one transversal root",
        ));
    }
    let lo = r.left();
    let (s_lo, s_hi) = (r.left_sign(), r.tail_sign());
    match r.critical_point() {
        None => {
            // d is strictly monotone on the whole domain.
            let root = r.piece_root(lo, f64::INFINITY, s_lo, s_hi)?;
            Ok(match root {
                Some(z) => (
                    vec![RootInfo {
                        location: z,
                        sign_change: true,
                        derivative_zero: false,
                    }],
                    "monotone, one transversal root",
                ),
                None => (Vec::new(), "monotone, no roots"),
            })
        }
        Some(zc) => {
            let v = r.eval(zc);
            let scale = 1.0 + r.c.abs() + r.f.eval(zc).abs();
            if v.abs() <= TANGENT_TOL * scale {
                // The extremum sits on the axis: one non-transversal root.
                return Ok((
                    vec![RootInfo {
                        location: zc,
                        sign_change: false,
                        derivative_zero: true,
                    }],
                    "tangent root at the critical point",
                ));
            }
            let sv = v.signum();
            let mut roots = Vec::new();
            if let Some(z) = r.piece_root(lo, zc, s_lo, sv)? {
                roots.push(RootInfo {
                    location: z,
                    sign_change: true,
                    derivative_zero: false,
                });
            }
            if let Some(z) = r.piece_root(zc, f64::INFINITY, sv, s_hi)? {
                roots.push(RootInfo {
                    location: z,
                    sign_change: true,
                    derivative_zero: false,
                });
            }
            let outcome = match roots.len() {
                0 => "extremum off the axis, no roots",
                1 => "one transversal root",
                _ => "two transversal roots",
            };
            Ok((roots, outcome))
        }
    }
}

/// Counts strict sign changes of the difference over a dense logarithmic
/// grid covering offsets 1e−9..1e9 from the finite end of the domain.
/// Serves as the scan oracle cross-validating [`analyze_roots`].
pub fn dense_sign_scan(d: &DiffFunction, points: usize) -> usize {
    let (lo, hi) = d.domain();
    let anchor = if lo.is_finite() { lo } else { hi };
    let scale = 1.0 + anchor.abs();
    let (t_min, t_max) = (1e-9 * scale, 1e9 * scale);
    let (l0, l1) = (t_min.ln(), t_max.ln());
    let mut changes = 0usize;
    let mut prev = 0.0_f64;
    for j in 0..points {
        let t = (l0 + (l1 - l0) * j as f64 / (points - 1) as f64).exp();
        let x = if lo.is_finite() { lo + t } else { hi - t };
        let v = d.eval(x);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if prev != 0.0 && (prev > 0.0) != (v > 0.0) {
            changes += 1;
        }
        prev = v;
    }
    changes
}

/// Window covered by [`dense_sign_scan`], for excluding out-of-range roots
/// when comparing counts.
pub fn scan_window(d: &DiffFunction) -> (f64, f64) {
    let (lo, hi) = d.domain();
    let anchor = if lo.is_finite() { lo } else { hi };
    let scale = 1.0 + anchor.abs();
    if lo.is_finite() {
        (lo + 1e-9 * scale, lo + 1e9 * scale)
    } else {
        (hi - 1e9 * scale, hi - 1e-9 * scale)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseTableConfig {
    pub trials: u64,
    pub seed: u64,
    /// Grid resolution of the full scan oracle.
    pub scan_points: usize,
    /// Full-resolution scans run on every stride-th trial; the others use
    /// `light_scan_points`.
    pub scan_stride: u64,
    pub light_scan_points: usize,
}

impl Default for CaseTableConfig {
    fn default() -> Self {
        CaseTableConfig {
            trials: 1000,
            seed: 0,
            scan_points: 1_000_000,
            scan_stride: 1,
            light_scan_points: 20_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseTableViolation {
    pub trial: u64,
    pub params: DiffParams,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseTableReport {
    pub trials: u64,
    pub seed: u64,
    pub violations: Vec<CaseTableViolation>,
    pub case_counts: BTreeMap<String, u64>,
}

impl CaseTableReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Randomized verification of the root-structure case analysis over a
/// function pair: samples parameters, analyzes both differences, checks
/// mutual exclusivity and the parameter-sign side conditions of every
/// clause, and cross-validates root counts against the scan oracle.
pub fn verify_case_table(
    f1: &ShFunction,
    f2: &ShFunction,
    cfg: &CaseTableConfig,
) -> CaseTableReport {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut violations = Vec::new();
    let mut case_counts = BTreeMap::new();
    for trial in 0..cfg.trials {
        let params = sample_params(&mut rng);
        let mut fail = |message: String| {
            violations.push(CaseTableViolation {
                trial,
                params,
                message,
            });
        };
        let check = DiffFunction::check(params, f1).expect("sampled params are valid");
        let hat = DiffFunction::hat(params, f2).expect("sampled params are valid");
        let (rep_c, rep_h) = match (analyze_roots(&check), analyze_roots(&hat)) {
            (Ok(c), Ok(h)) => (c, h),
            (c, h) => {
                fail(format!("analysis failed: {c:?} / {h:?}"));
                continue;
            }
        };
        *case_counts
            .entry(format!("check: {}", rep_c.case_label))
            .or_insert(0) += 1;
        *case_counts
            .entry(format!("hat: {}", rep_h.case_label))
            .or_insert(0) += 1;

        if rep_c.count + rep_h.count > 2 {
            fail(format!(
                "combined count {} + {} exceeds 2",
                rep_c.count, rep_h.count
            ));
        }
        for (d, rep) in [(&check, &rep_c), (&hat, &rep_h)] {
            if let Some(m) = clause_violation(d, rep) {
                fail(format!("{:?}: {m}", d.kind));
            }
            for root in &rep.roots {
                let resid = d.eval(root.location).abs();
                let bound = 1e-9 * (1.0 + (params.c1 - params.c2).abs());
                if root.sign_change && resid > bound {
                    fail(format!(
                        "{:?}: residual {resid} at root {} exceeds {bound}",
                        d.kind, root.location
                    ));
                }
            }
        }
        if let Some(m) = combined_violation(&params, &rep_c, &rep_h) {
            fail(m);
        }

        let points = if cfg.scan_stride > 0 && trial % cfg.scan_stride == 0 {
            cfg.scan_points
        } else {
            cfg.light_scan_points
        };
        for (d, rep) in [(&check, &rep_c), (&hat, &rep_h)] {
            let (wlo, whi) = scan_window(d);
            let in_window = rep
                .roots
                .iter()
                .filter(|r| r.sign_change && r.location > wlo && r.location < whi)
                .count();
            let scanned = dense_sign_scan(d, points);
            if scanned != in_window {
                fail(format!(
                    "{:?}: scan oracle found {scanned} sign changes, analysis {in_window}",
                    d.kind
                ));
            }
        }
    }
    CaseTableReport {
        trials: cfg.trials,
        seed: cfg.seed,
        violations,
        case_counts,
    }
}

fn sample_params(rng: &mut SplitMix64) -> DiffParams {
    loop {
        let mut p = DiffParams {
            a1: rng.log_uniform(0.2, 5.0),
            b1: rng.uniform(-4.0, 4.0),
            c1: rng.uniform(-4.0, 4.0),
            a2: rng.log_uniform(0.2, 5.0),
            b2: rng.uniform(-4.0, 4.0),
            c2: rng.uniform(-4.0, 4.0),
        };
        // Exercise the single-parameter clauses as well.
        if rng.chance(0.15) {
            p.b2 = p.b1;
        }
        if rng.chance(0.15) {
            p.c2 = p.c1;
        }
        if rng.chance(0.15) {
            p.a2 = p.a1;
        }
        if p.validate().is_ok() {
            return p;
        }
    }
}

/// Checks the analyzed outcome against the side conditions of the clause it
/// must fall under, in reduced form.
fn clause_violation(d: &DiffFunction, rep: &RootReport) -> Option<String> {
    let r = d.reduced();
    let (a, b, c) = (r.a, r.b, r.c);
    let transversal = rep.roots.iter().filter(|r| r.sign_change).count();
    let tangent = rep.roots.iter().filter(|r| r.derivative_zero).count();
    if a == 1.0 && b == 0.0 {
        return (rep.count != 0).then(|| "constant difference must have no roots".into());
    }
    if b == 0.0 && c == 0.0 {
        return (rep.count != 0).then(|| "pure scaling must have no roots".into());
    }
    if (b == 0.0) ^ (c == 0.0) {
        // Single-parameter clauses: at most one root, transversal, and
        // existence decided by the sign pattern.
        if a == 1.0 {
            return (rep.count != 0).then(|| "a=1 single-parameter case must have no roots".into());
        }
        let expect_root = (a > 1.0 && b > 0.0)
            || (a < 1.0 && b < 0.0)
            || (a > 1.0 && b == 0.0 && c < 0.0)
            || (a < 1.0 && b == 0.0 && c > 0.0);
        if expect_root && (transversal != 1 || tangent != 0) {
            return Some(format!(
                "single-parameter case expected one transversal root, got {rep:?}"
            ));
        }
        if !expect_root && rep.count != 0 {
            return Some(format!(
                "single-parameter case expected no roots, got {rep:?}"
            ));
        }
        return None;
    }
    // General clauses, b ≠ 0 and c ≠ 0.
    match (transversal, tangent) {
        (2, 0) | (0, 1) => {
            let side = (a < 1.0 && b < 0.0 && c > 0.0) || (a > 1.0 && b > 0.0 && c < 0.0);
            (!side).then(|| {
                format!(
                    "two roots / tangency requires (a<1,b<0,c>0) or (a>1,b>0,c<0); got {}",
                    rep.case_label
                )
            })
        }
        (1, 0) => (b * c <= 0.0).then(|| "one transversal root requires bc > 0".into()),
        (0, 0) => (b * c >= 0.0).then(|| "no roots requires bc < 0".into()),
        other => Some(format!("impossible outcome {other:?}")),
    }
}

/// The combined two-difference clauses: with one of b, c shared the root
/// lands on exactly one side (or neither when a₁ = a₂); in the generic case
/// the outcomes pair as (2, 0), (tangent, 0) or (1, 1).
fn combined_violation(
    p: &DiffParams,
    rep_c: &RootReport,
    rep_h: &RootReport,
) -> Option<String> {
    let single = (p.b1 == p.b2) ^ (p.c1 == p.c2);
    if single {
        if p.a1 == p.a2 {
            return (rep_c.count + rep_h.count != 0).then(|| {
                "shared b or c with a1=a2 must leave both differences rootless".into()
            });
        }
        let ok = (rep_c.count == 1 && rep_h.count == 0 && rep_c.roots[0].sign_change)
            || (rep_c.count == 0 && rep_h.count == 1 && rep_h.roots[0].sign_change);
        return (!ok).then(|| {
            format!(
                "shared b or c with a1≠a2 must give exactly one transversal root on one side, got {} and {}",
                rep_c.count, rep_h.count
            )
        });
    }
    if p.b1 != p.b2 && p.c1 != p.c2 && rep_c.count >= 1 {
        let c_tangent = rep_c.roots.iter().any(|r| r.derivative_zero);
        let ok = (rep_c.count == 2 && rep_h.count == 0)
            || (c_tangent && rep_c.count == 1 && rep_h.count == 0)
            || (rep_c.count == 1 && !c_tangent && rep_h.count == 1
                && rep_h.roots[0].sign_change);
        return (!ok).then(|| {
            format!(
                "generic case with check roots must pair as (2,0), (tangent,0) or (1,1); got {} and {}",
                rep_c.count, rep_h.count
            )
        });
    }
    None
}
