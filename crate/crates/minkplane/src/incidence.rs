//! The three geometric solvers: join (circle through three points),
//! intersect (at most two points for same-half pairs), and touch (the unique
//! tangent circle), plus a randomized checker for the joining and touching
//! axioms.
//!
//! Every solver canonicalizes its input by Φ∞ conjugation (translations and
//! y-scalings) and, for the positive half, by the mirror x ↦ −x, reducing
//! the case analysis to a handful of sign patterns. Each case ends in one
//! scalar equation whose bracket comes from known limits at the ends of its
//! interval, solved by bisection.

use crate::circles::{Circle, PlaneSpec};
use crate::functions::{invert, FunctionError, ShFunction};
use crate::roots::{analyze_roots, DiffFunction, DiffParams, RootError};
use crate::rng::SplitMix64;
use crate::sampling;
use crate::solve;
use crate::torus::{
    self, AdmissiblePosition, AdmissibleType, ExtendedReal, Half, TorusPoint, TorusError,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IncidenceError {
    #[error("two of the points are parallel")]
    ParallelPoints,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("internal inconsistency, triple admissible for neither half: {0}")]
    NotAdmissibleForEitherHalf(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("the point p does not lie on the circle")]
    PointNotOnCircle,
    #[error("the point q lies on the circle")]
    PointOnCircle,
    #[error("the two circles are identical")]
    IdenticalCircles,
}

impl From<TorusError> for IncidenceError {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::ParallelPoints => IncidenceError::ParallelPoints,
            TorusError::DegenerateTriple => {
                IncidenceError::Degenerate("coinciding S¹ coordinates".into())
            }
        }
    }
}

impl From<RootError> for IncidenceError {
    fn from(e: RootError) -> Self {
        IncidenceError::NoConvergence(format!("root analysis: {e}"))
    }
}

impl From<FunctionError> for IncidenceError {
    fn from(e: FunctionError) -> Self {
        IncidenceError::NoConvergence(format!("function inversion: {e}"))
    }
}

/// Which normalized configuration and proof case produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTrace {
    pub half: Half,
    pub admissible: AdmissibleType,
    /// 0 for line solutions, otherwise the 1-based case index of the
    /// configuration dispatch.
    pub case_index: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinSolution {
    pub circle: Circle,
    /// Membership residual per input point, in input order.
    pub residuals: [f64; 3],
    pub case_trace: CaseTrace,
    /// Set when a residual exceeds 1e−6: the geometry is exact but the
    /// numerics degraded (near-degenerate input).
    pub conditioning_warning: bool,
}

const RESIDUAL_TOL: f64 = 1e-6;

fn fin(x: ExtendedReal) -> f64 {
    x.finite().expect("finite coordinate expected")
}

fn solve_scalar<F: Fn(f64) -> f64>(
    g: F,
    target: f64,
    lo: f64,
    hi: f64,
    what: &str,
) -> Result<f64, IncidenceError> {
    solve::solve_any(&|b| g(b) - target, lo, hi).ok_or_else(|| {
        IncidenceError::NoConvergence(format!(
            "{what}: no bracket for target {target} on ({lo}, {hi})"
        ))
    })
}

/// Unique circle through three pairwise nonparallel points.
///
/// Determines the half from the orientation test, conjugates to the
/// canonical configuration of the matching admissible type, dispatches on
/// the sign pattern, solves the resulting scalar equation, and conjugates
/// back.
pub fn join(
    plane: &PlaneSpec,
    p1: TorusPoint,
    p2: TorusPoint,
    p3: TorusPoint,
) -> Result<JoinSolution, IncidenceError> {
    let pts = [p1, p2, p3];
    let (half, adm, circle, case_index) =
        match torus::classify_admissible(p1, p2, p3, Half::Neg)? {
            Some(adm) => {
                let (f1, f2) = plane.pair(Half::Neg);
                let (c, ci) = join_neg(f1, f2, &adm, &pts)?;
                (Half::Neg, adm, c, ci)
            }
            None => {
                let m = [p1.mirror(), p2.mirror(), p3.mirror()];
                let adm = torus::classify_admissible(m[0], m[1], m[2], Half::Neg)?
                    .ok_or_else(|| {
                        IncidenceError::NotAdmissibleForEitherHalf(format!(
                            "{p1}, {p2}, {p3}"
                        ))
                    })?;
                let (f3, f4) = plane.pair(Half::Pos);
                let (c, ci) = join_neg(f3, f4, &adm, &m)?;
                (Half::Pos, adm, c.mirror(), ci)
            }
        };
    let residuals = [
        plane.membership_residual(&circle, pts[0]),
        plane.membership_residual(&circle, pts[1]),
        plane.membership_residual(&circle, pts[2]),
    ];
    let conditioning_warning = residuals.iter().any(|&r| !(r <= RESIDUAL_TOL));
    Ok(JoinSolution {
        circle,
        residuals,
        case_trace: CaseTrace {
            half,
            admissible: adm.kind,
            case_index,
        },
        conditioning_warning,
    })
}

/// Negative-half join over an explicit generator pair, on points already
/// known to be admissible for this half.
fn join_neg(
    f1: &ShFunction,
    f2: &ShFunction,
    adm: &AdmissiblePosition,
    pts: &[TorusPoint; 3],
) -> Result<(Circle, u8), IncidenceError> {
    let q = [pts[adm.perm[0]], pts[adm.perm[1]], pts[adm.perm[2]]];
    let bad = |msg: String| IncidenceError::NotAdmissibleForEitherHalf(msg);
    match adm.kind {
        AdmissibleType::Type1 => {
            // Line through the two finite points, completed by (∞, ∞).
            let (x2, y2) = (fin(q[1].x), fin(q[1].y));
            let (x3, y3) = (fin(q[2].x), fin(q[2].y));
            let s = (y3 - y2) / (x3 - x2);
            debug_assert!(s < 0.0, "negative-half admissible line must descend");
            Ok((Circle::NegLine { s, t: y2 - s * x2 }, 1))
        }
        AdmissibleType::Type2 => {
            // Translate p2 = (∞, y2), p3 = (x3, ∞) to (∞, 0), (0, ∞); the
            // circle has b = c = 0 there and a comes from p1's branch.
            let y2 = fin(q[1].y);
            let x3 = fin(q[2].x);
            let u = fin(q[0].x) - x3;
            let v = fin(q[0].y) - y2;
            let (a, ci) = if u > 0.0 && v > 0.0 {
                (v / f1.eval(u), 1)
            } else if u < 0.0 && v < 0.0 {
                (-v / f2.eval(-u), 2)
            } else {
                return Err(bad(format!("type 2 with u = {u}, v = {v}")));
            };
            let c0 = Circle::NegCurve { a, b: 0.0, c: 0.0 };
            Ok((c0.apply_phi_infinity(1.0, x3, y2), ci))
        }
        AdmissibleType::Type3 => {
            // Canonical frame: branch point of the circle at p3's x (b = 0
            // after translating by x3), y-origin at the finite point with
            // the smaller x.
            let x3 = fin(q[2].x);
            let (hi, lo) = if fin(q[0].x) > fin(q[1].x) {
                (q[0], q[1])
            } else {
                (q[1], q[0])
            };
            let u1 = fin(hi.x) - x3;
            let u2 = fin(lo.x) - x3;
            let w1 = fin(hi.y) - fin(lo.y);
            let (a, c0, ci) = if u1 > u2 && u2 > 0.0 {
                let a = w1 / (f1.eval(u1) - f1.eval(u2));
                (a, -a * f1.eval(u2), 1)
            } else if u1 > 0.0 && u2 < 0.0 {
                let a = w1 / (f1.eval(u1) + f2.eval(-u2));
                (a, a * f2.eval(-u2), 2)
            } else if u1 < 0.0 && u1 > u2 {
                let a = w1 / (f2.eval(-u2) - f2.eval(-u1));
                (a, a * f2.eval(-u2), 3)
            } else {
                return Err(bad(format!("type 3 with u1 = {u1}, u2 = {u2}")));
            };
            if !(a > 0.0) {
                return Err(bad(format!("type 3 produced a = {a}")));
            }
            let c0 = Circle::NegCurve { a, b: 0.0, c: c0 };
            Ok((c0.apply_phi_infinity(1.0, x3, fin(lo.y)), ci))
        }
        AdmissibleType::Type4 => {
            // Canonical frame: centre height of the circle at p3's y (c = 0
            // after translating by y3), x-origin at the finite point with
            // the smaller y.
            let y3 = fin(q[2].y);
            let (hi, lo) = if fin(q[0].y) > fin(q[1].y) {
                (q[0], q[1])
            } else {
                (q[1], q[0])
            };
            let v1 = fin(hi.y) - y3;
            let v2 = fin(lo.y) - y3;
            let u1 = fin(hi.x) - fin(lo.x);
            let (b0, a, ci);
            if v1 > v2 && v2 > 0.0 {
                if !(u1 < 0.0) {
                    return Err(bad(format!("type 4 case 1 with u1 = {u1}")));
                }
                b0 = solve_scalar(
                    |b| f1.eval(u1 + b) / f1.eval(b),
                    v1 / v2,
                    -u1,
                    f64::INFINITY,
                    "type 4 case 1",
                )?;
                a = v2 / f1.eval(b0);
                ci = 1;
            } else if v1 > 0.0 && v2 < 0.0 {
                if !(u1 > 0.0) {
                    return Err(bad(format!("type 4 case 2 with u1 = {u1}")));
                }
                b0 = solve_scalar(
                    |b| -f1.eval(u1 + b) / f2.eval(-b),
                    v1 / v2,
                    -u1,
                    0.0,
                    "type 4 case 2",
                )?;
                a = v1 / f1.eval(u1 + b0);
                ci = 2;
            } else if v1 < 0.0 && v1 > v2 {
                if !(u1 < 0.0) {
                    return Err(bad(format!("type 4 case 3 with u1 = {u1}")));
                }
                b0 = solve_scalar(
                    |b| f2.eval(-u1 - b) / f2.eval(-b),
                    v1 / v2,
                    f64::NEG_INFINITY,
                    0.0,
                    "type 4 case 3",
                )?;
                a = -v2 / f2.eval(-b0);
                ci = 3;
            } else {
                return Err(bad(format!("type 4 with v1 = {v1}, v2 = {v2}")));
            }
            if !(a > 0.0) {
                return Err(bad(format!("type 4 produced a = {a}")));
            }
            let c0 = Circle::NegCurve { a, b: b0, c: 0.0 };
            Ok((c0.apply_phi_infinity(1.0, fin(lo.x), y3), ci))
        }
        AdmissibleType::Type5 => {
            // Anchor the leftmost point at the origin; the other two then
            // have 0 < u1 < u2.
            let mut o = q;
            o.sort_by(|p, r| fin(p.x).total_cmp(&fin(r.x)));
            let anchor = o[0];
            let (ax, ay) = (fin(anchor.x), fin(anchor.y));
            let (u1, v1) = (fin(o[1].x) - ax, fin(o[1].y) - ay);
            let (u2, v2) = (fin(o[2].x) - ax, fin(o[2].y) - ay);
            if u1 * v2 == u2 * v1 {
                // Collinear: the joining element is a line.
                let s = v1 / u1;
                debug_assert!(s < 0.0);
                return Ok((Circle::NegLine { s, t: ay - s * ax }, 0));
            }
            let (b0, a, c0, ci);
            if v2 < v1 && v1 < 0.0 && v1 * u2 < u1 * v2 {
                // All three on the convex branch.
                b0 = solve_scalar(
                    |b| (f1.eval(u2 + b) - f1.eval(b)) / (f1.eval(u1 + b) - f1.eval(b)),
                    v2 / v1,
                    0.0,
                    f64::INFINITY,
                    "type 5 case 1",
                )?;
                a = v1 / (f1.eval(u1 + b0) - f1.eval(b0));
                c0 = -a * f1.eval(b0);
                ci = 1;
            } else if v1 > v2 && v2 > 0.0 {
                // Anchor on the concave branch, the others convex.
                b0 = solve_scalar(
                    |b| (f1.eval(u1 + b) + f2.eval(-b)) / (f1.eval(u2 + b) + f2.eval(-b)),
                    v1 / v2,
                    -u1,
                    0.0,
                    "type 5 case 2",
                )?;
                a = v1 / (f1.eval(u1 + b0) + f2.eval(-b0));
                c0 = a * f2.eval(-b0);
                ci = 2;
            } else if v1 < 0.0 && v2 > 0.0 {
                // Anchor and middle point concave, far point convex.
                b0 = solve_scalar(
                    |b| (f2.eval(-b) - f2.eval(-u1 - b)) / (f1.eval(u2 + b) + f2.eval(-b)),
                    v1 / v2,
                    -u2,
                    -u1,
                    "type 5 case 3",
                )?;
                a = v2 / (f1.eval(u2 + b0) + f2.eval(-b0));
                c0 = a * f2.eval(-b0);
                ci = 3;
            } else if v2 < v1 && v1 < 0.0 && v1 * u2 > u1 * v2 {
                // All three on the concave branch.
                b0 = solve_scalar(
                    |b| (f2.eval(-b) - f2.eval(-u2 - b)) / (f2.eval(-b) - f2.eval(-u1 - b)),
                    v2 / v1,
                    f64::NEG_INFINITY,
                    -u2,
                    "type 5 case 4",
                )?;
                a = v1 / (f2.eval(-b0) - f2.eval(-u1 - b0));
                c0 = a * f2.eval(-b0);
                ci = 4;
            } else {
                return Err(bad(format!(
                    "type 5 with v1 = {v1}, v2 = {v2} matches no negative-half case"
                )));
            }
            if !(a > 0.0) {
                return Err(bad(format!("type 5 produced a = {a}")));
            }
            let c = Circle::NegCurve { a, b: b0, c: c0 };
            Ok((c.apply_phi_infinity(1.0, ax, ay), ci))
        }
    }
}

/// Intersection of two distinct circles. Same-half pairs report at most two
/// points; cross-half pairs are handled by monotone bisection per branch
/// pair (two graphs of opposite orientation classes always cross twice).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionSet {
    pub points: Vec<TorusPoint>,
    pub tangential: bool,
}

pub fn intersect(
    plane: &PlaneSpec,
    c: &Circle,
    d: &Circle,
) -> Result<IntersectionSet, IncidenceError> {
    if c == d {
        return Err(IncidenceError::IdenticalCircles);
    }
    let mut points = match (c.half(), d.half()) {
        (Half::Neg, Half::Neg) => {
            let (f1, f2) = plane.pair(Half::Neg);
            same_half_neg(f1, f2, c, d)?
        }
        (Half::Pos, Half::Pos) => {
            let (f3, f4) = plane.pair(Half::Pos);
            let pts = same_half_neg(f3, f4, &c.mirror(), &d.mirror())?;
            pts.into_iter().map(|p| p.mirror()).collect()
        }
        _ => cross_half(plane, c, d),
    };
    points.sort_by(|p, q| {
        p.x.angle()
            .total_cmp(&q.x.angle())
            .then(p.y.angle().total_cmp(&q.y.angle()))
    });
    let tangential = points.len() == 1;
    Ok(IntersectionSet { points, tangential })
}

/// g has a single extremum on (lo, hi) located by the sign change of its
/// strictly monotone derivative; both tails of g leave the axis. Returns
/// the roots and whether the extremum sits on the axis (a tangency).
fn unimodal_roots<F, D>(g: F, dg: D, lo: f64, hi: f64, tangent_scale: f64) -> (Vec<f64>, bool)
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let xm = match solve::solve_any(&dg, lo, hi) {
        Some(x) => x,
        None => return (solve::solve_all(&g, lo, hi), false),
    };
    let v = g(xm);
    if v.abs() <= 1e-12 * tangent_scale {
        return (vec![xm], true);
    }
    let mut roots = Vec::new();
    if let Some(x) = solve::solve_any(&g, lo, xm) {
        roots.push(x);
    }
    if let Some(x) = solve::solve_any(&g, xm, hi) {
        roots.push(x);
    }
    (roots, false)
}

/// Finite + infinite intersections of two distinct negative-half circles
/// over the generator pair (f1, f2).
fn same_half_neg(
    f1: &ShFunction,
    f2: &ShFunction,
    c: &Circle,
    d: &Circle,
) -> Result<Vec<TorusPoint>, IncidenceError> {
    let inf = ExtendedReal::Infinity;
    match (*c, *d) {
        (Circle::NegLine { s: s1, t: t1 }, Circle::NegLine { s: s2, t: t2 }) => {
            let mut pts = vec![TorusPoint::infinity()];
            if s1 != s2 {
                let x = (t2 - t1) / (s1 - s2);
                pts.push(TorusPoint::new(x, s1 * x + t1));
            }
            Ok(pts)
        }
        (Circle::NegCurve { a, b, c: cc }, Circle::NegLine { s, t })
        | (Circle::NegLine { s, t }, Circle::NegCurve { a, b, c: cc }) => {
            let mut pts = Vec::new();
            let scale = 1.0 + cc.abs() + t.abs();
            // Convex branch: the difference has a single minimum.
            let conv = |x: f64| a * f1.eval(x + b) + cc - s * x - t;
            let dconv = |x: f64| a * f1.deriv(x + b) - s;
            let (roots, _) = unimodal_roots(conv, dconv, -b, f64::INFINITY, scale);
            pts.extend(roots);
            // Concave branch: single maximum.
            let conc = |x: f64| -a * f2.eval(-x - b) + cc - s * x - t;
            let dconc = |x: f64| a * f2.deriv(-x - b) - s;
            let (roots, _) = unimodal_roots(conc, dconc, f64::NEG_INFINITY, -b, scale);
            pts.extend(roots);
            Ok(pts
                .into_iter()
                .map(|x| TorusPoint::new(x, s * x + t))
                .collect())
        }
        (
            Circle::NegCurve {
                a: a1,
                b: b1,
                c: c1,
            },
            Circle::NegCurve {
                a: a2,
                b: b2,
                c: c2,
            },
        ) => {
            let mut pts = Vec::new();
            if b1 == b2 {
                pts.push(TorusPoint::new(-b1, inf));
            }
            if c1 == c2 {
                pts.push(TorusPoint::new(inf, c1));
            }
            let params = DiffParams {
                a1,
                b1,
                c1,
                a2,
                b2,
                c2,
            };
            // Convex-convex and concave-concave overlaps via the
            // difference-function root analysis.
            let check = DiffFunction::check(params, f1)?;
            for root in analyze_roots(&check)?.roots {
                let x = root.location;
                pts.push(TorusPoint::new(x, a1 * f1.eval(x + b1) + c1));
            }
            let hat = DiffFunction::hat(params, f2)?;
            for root in analyze_roots(&hat)?.roots {
                let x = root.location;
                pts.push(TorusPoint::new(x, -a1 * f2.eval(-x - b1) + c1));
            }
            // Mixed branches overlap on one side only.
            let scale = 1.0 + c1.abs() + c2.abs();
            if b2 < b1 {
                // convex(c) against concave(d) on (−b1, −b2)
                let m = |x: f64| a1 * f1.eval(x + b1) + c1 + a2 * f2.eval(-x - b2) - c2;
                let dm = |x: f64| a1 * f1.deriv(x + b1) - a2 * f2.deriv(-x - b2);
                let (roots, _) = unimodal_roots(m, dm, -b1, -b2, scale);
                pts.extend(
                    roots
                        .into_iter()
                        .map(|x| TorusPoint::new(x, a1 * f1.eval(x + b1) + c1)),
                );
            }
            if b1 < b2 {
                // concave(c) against convex(d) on (−b2, −b1)
                let m = |x: f64| -a1 * f2.eval(-x - b1) + c1 - a2 * f1.eval(x + b2) - c2;
                let dm = |x: f64| a1 * f2.deriv(-x - b1) - a2 * f1.deriv(x + b2);
                let (roots, _) = unimodal_roots(m, dm, -b2, -b1, scale);
                pts.extend(
                    roots
                        .into_iter()
                        .map(|x| TorusPoint::new(x, -a1 * f2.eval(-x - b1) + c1)),
                );
            }
            Ok(pts)
        }
        _ => unreachable!("same_half_neg called with a positive-half circle"),
    }
}

/// Branches of a circle as (open interval, evaluator); lines are a single
/// branch over all of R.
fn branches<'p>(
    plane: &'p PlaneSpec,
    circle: &Circle,
) -> Vec<(f64, f64, Box<dyn Fn(f64) -> f64 + 'p>)> {
    match *circle {
        Circle::NegCurve { a, b, c } => {
            let (f1, f2) = plane.pair(Half::Neg);
            vec![
                (
                    -b,
                    f64::INFINITY,
                    Box::new(move |x| a * f1.eval(x + b) + c) as Box<dyn Fn(f64) -> f64>,
                ),
                (
                    f64::NEG_INFINITY,
                    -b,
                    Box::new(move |x| -a * f2.eval(-x - b) + c),
                ),
            ]
        }
        Circle::PosCurve { a, b, c } => {
            let (f3, f4) = plane.pair(Half::Pos);
            vec![
                (
                    f64::NEG_INFINITY,
                    b,
                    Box::new(move |x| a * f3.eval(b - x) + c) as Box<dyn Fn(f64) -> f64>,
                ),
                (b, f64::INFINITY, Box::new(move |x| -a * f4.eval(x - b) + c)),
            ]
        }
        Circle::NegLine { s, t } | Circle::PosLine { s, t } => {
            vec![(
                f64::NEG_INFINITY,
                f64::INFINITY,
                Box::new(move |x| s * x + t),
            )]
        }
    }
}

/// Cross-half intersection: exact sharing of infinite points plus monotone
/// bisection on every overlapping branch pair (one branch decreasing, the
/// other increasing, so each pair meets at most once).
fn cross_half(plane: &PlaneSpec, c: &Circle, d: &Circle) -> Vec<TorusPoint> {
    let mut pts: Vec<TorusPoint> = c
        .infinite_points()
        .into_iter()
        .filter(|p| d.infinite_points().contains(p))
        .collect();
    for (lo1, hi1, e1) in branches(plane, c) {
        for (lo2, hi2, e2) in branches(plane, d) {
            let lo = lo1.max(lo2);
            let hi = hi1.min(hi2);
            if lo < hi {
                if let Some(x) = solve::solve_any(&|x| e1(x) - e2(x), lo, hi) {
                    pts.push(TorusPoint::new(x, e1(x)));
                }
            }
        }
    }
    pts
}

/// Unique circle through p and q touching C at p (meeting C exactly there).
/// p must lie on C, q neither on C nor parallel to p.
pub fn touch(
    plane: &PlaneSpec,
    circle: &Circle,
    p: TorusPoint,
    q: TorusPoint,
) -> Result<Circle, IncidenceError> {
    Ok(touch_candidates(plane, circle, p, q)?[0])
}

/// All circles produced by the touching construction (every root of its
/// scalar equation). Exact uniqueness means a single candidate; extra
/// ladder roots, when numerically present, are returned for the uniqueness
/// checker to refute.
pub fn touch_candidates(
    plane: &PlaneSpec,
    circle: &Circle,
    p: TorusPoint,
    q: TorusPoint,
) -> Result<Vec<Circle>, IncidenceError> {
    const ON_TOL: f64 = 1e-8;
    if !plane.contains(circle, p, ON_TOL) {
        return Err(IncidenceError::PointNotOnCircle);
    }
    if plane.contains(circle, q, ON_TOL) {
        return Err(IncidenceError::PointOnCircle);
    }
    if torus::parallel(p, q) {
        return Err(IncidenceError::ParallelPoints);
    }
    match circle.half() {
        Half::Neg => {
            let (f1, f2) = plane.pair(Half::Neg);
            touch_neg(f1, f2, circle, p, q)
        }
        Half::Pos => {
            let (f3, f4) = plane.pair(Half::Pos);
            let cands = touch_neg(f3, f4, &circle.mirror(), p.mirror(), q.mirror())?;
            Ok(cands.into_iter().map(|c| c.mirror()).collect())
        }
    }
}

fn touch_neg(
    f1: &ShFunction,
    f2: &ShFunction,
    circle: &Circle,
    p: TorusPoint,
    q: TorusPoint,
) -> Result<Vec<Circle>, IncidenceError> {
    match (p.x, p.y) {
        // p = (∞, ∞): C is a line, D the parallel line through q.
        (ExtendedReal::Infinity, ExtendedReal::Infinity) => {
            let s = match *circle {
                Circle::NegLine { s, .. } => s,
                _ => return Err(IncidenceError::PointNotOnCircle),
            };
            let (xq, yq) = (fin(q.x), fin(q.y));
            Ok(vec![Circle::NegLine { s, t: yq - s * xq }])
        }
        // p = (−b₀, ∞): copy a and b, choose c from q's branch.
        (ExtendedReal::Finite(_), ExtendedReal::Infinity) => {
            let (a0, b0) = match *circle {
                Circle::NegCurve { a, b, .. } => (a, b),
                _ => return Err(IncidenceError::PointNotOnCircle),
            };
            let c1 = match (q.x, q.y) {
                (ExtendedReal::Infinity, ExtendedReal::Finite(yq)) => yq,
                (ExtendedReal::Finite(xq), ExtendedReal::Finite(yq)) => {
                    if xq > -b0 {
                        yq - a0 * f1.eval(xq + b0)
                    } else {
                        yq + a0 * f2.eval(-xq - b0)
                    }
                }
                _ => unreachable!("q parallel to p was rejected"),
            };
            Ok(vec![Circle::NegCurve {
                a: a0,
                b: b0,
                c: c1,
            }])
        }
        // p = (∞, c₀): copy a and c, solve for b through the inverse.
        (ExtendedReal::Infinity, ExtendedReal::Finite(_)) => {
            let (a0, c0) = match *circle {
                Circle::NegCurve { a, c, .. } => (a, c),
                _ => return Err(IncidenceError::PointNotOnCircle),
            };
            let b1 = match (q.x, q.y) {
                (ExtendedReal::Finite(xq), ExtendedReal::Infinity) => -xq,
                (ExtendedReal::Finite(xq), ExtendedReal::Finite(yq)) => {
                    if yq > c0 {
                        invert(f1, (yq - c0) / a0)? - xq
                    } else {
                        -xq - invert(f2, (c0 - yq) / a0)?
                    }
                }
                _ => unreachable!("q parallel to p was rejected"),
            };
            Ok(vec![Circle::NegCurve {
                a: a0,
                b: b1,
                c: c0,
            }])
        }
        // p finite: match the tangent slope of C at p.
        (ExtendedReal::Finite(xp), ExtendedReal::Finite(yp)) => {
            let s = match *circle {
                Circle::NegLine { s, .. } => s,
                Circle::NegCurve { a, b, .. } => {
                    if xp > -b {
                        a * f1.deriv(xp + b)
                    } else {
                        a * f2.deriv(-xp - b)
                    }
                }
                _ => unreachable!("negative-half circle expected"),
            };
            let cands = touch_finite(f1, f2, s, xp, yp, q)?;
            Ok(cands
                .into_iter()
                .map(|c| c.apply_phi_infinity(1.0, xp, yp))
                .collect())
        }
    }
}

/// Tangency through the origin with prescribed slope s < 0, q given in the
/// translated frame of p. Returns one circle per root of the case's scalar
/// equation (exactly one in exact arithmetic).
fn touch_finite(
    f1: &ShFunction,
    f2: &ShFunction,
    s: f64,
    xp: f64,
    yp: f64,
    q: TorusPoint,
) -> Result<Vec<Circle>, IncidenceError> {
    let scalar_all = |g: &dyn Fn(f64) -> f64, target: f64, lo: f64, hi: f64| -> Vec<f64> {
        solve::solve_all(&|b| g(b) - target, lo, hi)
    };
    match (q.x, q.y) {
        (ExtendedReal::Infinity, ExtendedReal::Infinity) => {
            // The tangent line itself.
            return Ok(vec![Circle::NegLine { s, t: 0.0 }]);
        }
        (ExtendedReal::Finite(xq), ExtendedReal::Infinity) => {
            // Case 1: the branch point goes under q.
            let u = xq - xp;
            let b1 = -u;
            let circle = if u < 0.0 {
                let a = s / f1.deriv(b1);
                Circle::NegCurve {
                    a,
                    b: b1,
                    c: -a * f1.eval(b1),
                }
            } else {
                let a = s / f2.deriv(-b1);
                Circle::NegCurve {
                    a,
                    b: b1,
                    c: a * f2.eval(-b1),
                }
            };
            return Ok(vec![circle]);
        }
        (ExtendedReal::Infinity, ExtendedReal::Finite(yq)) => {
            // Case 2: the centre height goes to q; b solves f′/f = s/(−c₁)
            // on the matching branch.
            let v = yq - yp;
            let cands = if v < 0.0 {
                let g = |b: f64| f1.deriv(b) / f1.eval(b);
                scalar_all(&g, -s / v, 0.0, f64::INFINITY)
                    .into_iter()
                    .map(|b| {
                        let a = -v / f1.eval(b);
                        Circle::NegCurve { a, b, c: v }
                    })
                    .collect::<Vec<_>>()
            } else {
                let g = |w: f64| f2.deriv(w) / f2.eval(w);
                scalar_all(&g, s / v, 0.0, f64::INFINITY)
                    .into_iter()
                    .map(|w| {
                        let a = v / f2.eval(w);
                        Circle::NegCurve { a, b: -w, c: v }
                    })
                    .collect::<Vec<_>>()
            };
            if cands.is_empty() {
                return Err(IncidenceError::NoConvergence(
                    "touch case 2: no bracket for the log-derivative equation".into(),
                ));
            }
            return Ok(cands);
        }
        (ExtendedReal::Finite(xq), ExtendedReal::Finite(yq)) => {
            let u = xq - xp;
            let v = yq - yp;
            if v == s * u {
                // q on the tangent line through p.
                return Ok(vec![Circle::NegLine { s, t: 0.0 }]);
            }
            let mut cands = Vec::new();
            if u > 0.0 && v > 0.0 {
                // Case 6: p concave, q convex.
                let g = |b: f64| (f1.eval(u + b) + f2.eval(-b)) / f2.deriv(-b);
                for b in scalar_all(&g, v / s, -u, 0.0) {
                    let a = v / (f1.eval(u + b) + f2.eval(-b));
                    cands.push(Circle::NegCurve {
                        a,
                        b,
                        c: a * f2.eval(-b),
                    });
                }
            } else if u < 0.0 && v < 0.0 {
                // Case 4: p convex, q concave.
                let g = |b: f64| -(f2.eval(-u - b) + f1.eval(b)) / f1.deriv(b);
                for b in scalar_all(&g, v / s, 0.0, -u) {
                    let a = s / f1.deriv(b);
                    cands.push(Circle::NegCurve {
                        a,
                        b,
                        c: -a * f1.eval(b),
                    });
                }
            } else if (u > 0.0 && v > s * u) || (u < 0.0 && v > s * u && v > 0.0) {
                // Case 3: both on the convex branch.
                let g = |b: f64| (f1.eval(u + b) - f1.eval(b)) / f1.deriv(b);
                for b in scalar_all(&g, v / s, (-u).max(0.0), f64::INFINITY) {
                    let a = s / f1.deriv(b);
                    cands.push(Circle::NegCurve {
                        a,
                        b,
                        c: -a * f1.eval(b),
                    });
                }
            } else {
                // Case 5: both on the concave branch.
                let g = |w: f64| (f2.eval(w) - f2.eval(w - u)) / f2.deriv(w);
                for w in scalar_all(&g, v / s, u.max(0.0), f64::INFINITY) {
                    let a = s / f2.deriv(w);
                    cands.push(Circle::NegCurve {
                        a,
                        b: -w,
                        c: a * f2.eval(w),
                    });
                }
            }
            if cands.is_empty() {
                return Err(IncidenceError::NoConvergence(format!(
                    "finite touch: no bracket for u = {u}, v = {v}, s = {s}"
                )));
            }
            Ok(cands)
        }
    }
}

/// One randomized-check failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzViolation {
    pub check: String,
    pub trial: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: u64,
    pub seed: u64,
    pub checks_run: BTreeMap<String, u64>,
    pub violations: Vec<FuzzViolation>,
}

impl FuzzReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn point_close(p: TorusPoint, q: TorusPoint, tol: f64) -> bool {
    let coord = |a: ExtendedReal, b: ExtendedReal| match (a, b) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
            (a - b).abs() <= tol * (1.0 + a.abs())
        }
        (ExtendedReal::Infinity, ExtendedReal::Infinity) => true,
        _ => false,
    };
    coord(p.x, q.x) && coord(p.y, q.y)
}

/// Largest relative parameter distance between two circles of the same
/// variant; ∞ across variants.
pub fn circle_distance(c: &Circle, d: &Circle) -> f64 {
    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + a.abs().max(b.abs()));
    match (*c, *d) {
        (
            Circle::NegCurve { a, b, c: cc },
            Circle::NegCurve {
                a: a2,
                b: b2,
                c: c2,
            },
        )
        | (
            Circle::PosCurve { a, b, c: cc },
            Circle::PosCurve {
                a: a2,
                b: b2,
                c: c2,
            },
        ) => rel(a, a2).max(rel(b, b2)).max(rel(cc, c2)),
        (Circle::NegLine { s, t }, Circle::NegLine { s: s2, t: t2 })
        | (Circle::PosLine { s, t }, Circle::PosLine { s: s2, t: t2 }) => {
            rel(s, s2).max(rel(t, t2))
        }
        _ => f64::INFINITY,
    }
}

/// Randomized verification of the joining and touching axioms:
/// existence and uniqueness of joins, existence and uniqueness of tangent
/// circles, the two-point cap on same-half intersections, and the exact
/// two-point count for cross-half pairs.
pub fn fuzz_axioms(plane: &PlaneSpec, trials: u64, seed: u64) -> FuzzReport {
    let mut rng = SplitMix64::new(seed);
    let mut violations = Vec::new();
    let mut checks_run = BTreeMap::new();
    for trial in 0..trials {
        let mut run = |name: &str| {
            *checks_run.entry(name.to_owned()).or_insert(0) += 1;
        };
        let mut fail = |check: &str, detail: String| {
            violations.push(FuzzViolation {
                check: check.to_owned(),
                trial,
                detail,
            });
        };

        // J-exist: every admissible triple is joined with small residuals.
        run("join-exist");
        let pts = sampling::admissible_triple(&mut rng);
        match join(plane, pts[0], pts[1], pts[2]) {
            Ok(sol) => {
                if sol.residuals.iter().any(|&r| !(r <= RESIDUAL_TOL)) {
                    fail(
                        "join-exist",
                        format!("residuals {:?} for {:?}", sol.residuals, pts),
                    );
                }
            }
            Err(e) => fail("join-exist", format!("{e} for {pts:?}")),
        }

        // J-unique: overlapping triples of four concircular points give the
        // same circle.
        run("join-unique");
        if let Some((k, four)) = concircular_four(plane, &mut rng) {
            let s1 = join(plane, four[0], four[1], four[2]);
            let s2 = join(plane, four[1], four[2], four[3]);
            match (s1, s2) {
                (Ok(s1), Ok(s2)) => {
                    let dist = circle_distance(&s1.circle, &s2.circle);
                    if !(dist <= 1e-8) {
                        fail(
                            "join-unique",
                            format!("circles differ by {dist}: {:?} vs {:?} (on {k:?})", s1.circle, s2.circle),
                        );
                    }
                }
                (a, b) => fail("join-unique", format!("join failed: {a:?} / {b:?}")),
            }
        }

        // T-exist and T-unique.
        run("touch");
        if let Some((k, p, q)) = touch_config(plane, &mut rng) {
            match touch_candidates(plane, &k, p, q) {
                Ok(cands) => {
                    let d = cands[0];
                    if !plane.contains(&d, p, 1e-6) || !plane.contains(&d, q, 1e-6) {
                        fail("touch", format!("D misses p or q: {d:?} for {k:?}, {p}, {q}"));
                    }
                    match intersect(plane, &k, &d) {
                        Ok(set) => {
                            if set.points.len() != 1 || !point_close(set.points[0], p, 1e-6) {
                                fail(
                                    "touch",
                                    format!(
                                        "C ∩ D = {:?}, expected exactly {p} (C = {k:?}, D = {d:?})",
                                        set.points
                                    ),
                                );
                            }
                        }
                        Err(e) => fail("touch", format!("intersect failed: {e}")),
                    }
                    // Uniqueness: every other candidate from the scalar
                    // equation either coincides with D or fails tangency.
                    for cand in &cands[1..] {
                        if circle_distance(cand, &d) <= 1e-8 {
                            continue;
                        }
                        let tangent = plane.contains(cand, q, 1e-6)
                            && matches!(
                                intersect(plane, &k, cand),
                                Ok(set) if set.points.len() == 1
                                    && point_close(set.points[0], p, 1e-6)
                            );
                        if tangent {
                            fail(
                                "touch-unique",
                                format!("second tangent circle {cand:?} besides {d:?}"),
                            );
                        }
                    }
                }
                Err(e) => fail("touch", format!("{e} for {k:?}, p = {p}, q = {q}")),
            }
        }

        // Cap: same-half pairs never exceed two intersections.
        run("cap");
        let half = if rng.chance(0.5) { Half::Neg } else { Half::Pos };
        let c1 = sampling::circle_of_half(&mut rng, half);
        let c2 = sampling::circle_of_half(&mut rng, half);
        if c1 != c2 {
            match intersect(plane, &c1, &c2) {
                Ok(set) => {
                    if set.points.len() > 2 {
                        fail(
                            "cap",
                            format!("{} points for {c1:?} vs {c2:?}: {:?}", set.points.len(), set.points),
                        );
                    }
                }
                Err(e) => fail("cap", format!("{e}")),
            }
        }

        // Cross-half pairs meet in exactly two points.
        run("cross-half");
        let cn = sampling::circle_of_half(&mut rng, Half::Neg);
        let cp = sampling::circle_of_half(&mut rng, Half::Pos);
        match intersect(plane, &cn, &cp) {
            Ok(set) => {
                if set.points.len() != 2 {
                    fail(
                        "cross-half",
                        format!("{} points for {cn:?} vs {cp:?}", set.points.len()),
                    );
                }
            }
            Err(e) => fail("cross-half", format!("{e}")),
        }
    }
    FuzzReport {
        trials,
        seed,
        checks_run,
        violations,
    }
}

/// Four pairwise nonparallel points on a random circle.
pub(crate) fn concircular_four(
    plane: &PlaneSpec,
    rng: &mut SplitMix64,
) -> Option<(Circle, [TorusPoint; 4])> {
    let k = sampling::any_circle(rng);
    for _ in 0..40 {
        let pts = [
            sampling::point_on_circle(plane, rng, &k),
            sampling::point_on_circle(plane, rng, &k),
            sampling::point_on_circle(plane, rng, &k),
            sampling::point_on_circle(plane, rng, &k),
        ];
        let mut ok = pts.iter().all(|p| match p.y {
            ExtendedReal::Finite(v) => v.abs() < 1e6,
            ExtendedReal::Infinity => true,
        });
        for i in 0..4 {
            for j in (i + 1)..4 {
                ok &= !torus::parallel(pts[i], pts[j]);
                ok &= match (pts[i].x, pts[j].x) {
                    (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                        (a - b).abs() > sampling::MIN_SEP
                    }
                    _ => true,
                };
            }
        }
        if ok {
            return Some((k, pts));
        }
    }
    None
}

/// A circle, a point on it (all four case families occur), and a point off
/// it, nonparallel to the first.
fn touch_config(
    plane: &PlaneSpec,
    rng: &mut SplitMix64,
) -> Option<(Circle, TorusPoint, TorusPoint)> {
    let k = sampling::any_circle(rng);
    let p = sampling::point_on_circle(plane, rng, &k);
    if let ExtendedReal::Finite(v) = p.y {
        if v.abs() > 1e6 {
            return None;
        }
    }
    for _ in 0..40 {
        let q = sampling::general_point(rng);
        if torus::parallel(p, q) || plane.contains(&k, q, 1e-4) {
            continue;
        }
        // Keep conditioning sane: q's finite coordinates separated from p's.
        let sep = |a: ExtendedReal, b: ExtendedReal| match (a, b) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a - b).abs() > sampling::MIN_SEP,
            _ => true,
        };
        if sep(p.x, q.x) && sep(p.y, q.y) {
            return Some((k, p, q));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::ExtendedReal as ER;

    const INF: ER = ER::Infinity;

    fn pt(x: impl Into<ER>, y: impl Into<ER>) -> TorusPoint {
        TorusPoint::new(x, y)
    }

    #[test]
    fn join_type1_line() {
        let plane = PlaneSpec::classical();
        let sol = join(&plane, pt(INF, INF), pt(1.0, 2.0), pt(2.0, 1.0)).unwrap();
        assert_eq!(sol.circle, Circle::NegLine { s: -1.0, t: 3.0 });
        assert_eq!(sol.case_trace.half, Half::Neg);
        assert_eq!(sol.case_trace.admissible, AdmissibleType::Type1);
        assert!(sol.residuals.iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn join_type2_unit_curve() {
        let plane = PlaneSpec::classical();
        let sol = join(&plane, pt(1.0, 1.0), pt(INF, 0.0), pt(0.0, INF)).unwrap();
        assert_eq!(
            sol.circle,
            Circle::NegCurve {
                a: 1.0,
                b: 0.0,
                c: 0.0
            }
        );
        assert_eq!(sol.case_trace.admissible, AdmissibleType::Type2);
    }

    #[test]
    fn join_type5_matches_classical_closed_form() {
        // (1,2), (2,1), (4,0.5) lie on xy = 2 exactly.
        let plane = PlaneSpec::classical();
        let sol = join(&plane, pt(1.0, 2.0), pt(2.0, 1.0), pt(4.0, 0.5)).unwrap();
        match sol.circle {
            Circle::NegCurve { a, b, c } => {
                assert!((a - 2.0).abs() < 1e-9, "a = {a}");
                assert!(b.abs() < 1e-9 && c.abs() < 1e-9);
            }
            other => panic!("expected a curve, got {other:?}"),
        }
        assert!(sol.residuals.iter().all(|&r| r <= 1e-9));
    }

    #[test]
    fn join_positive_half_diagonal() {
        let plane = PlaneSpec::classical();
        let sol = join(&plane, pt(1.0, 1.0), pt(2.0, 2.0), pt(3.0, 3.0)).unwrap();
        assert_eq!(sol.case_trace.half, Half::Pos);
        assert!(sol.residuals.iter().all(|&r| r <= 1e-9), "{:?}", sol.residuals);
    }

    #[test]
    fn join_permutation_invariance_exact_types() {
        let plane = PlaneSpec::new(
            ShFunction::ReciprocalXPlusArctan,
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::ArcsinhReciprocal,
        );
        let mut rng = SplitMix64::new(0x5eed);
        for _ in 0..50 {
            let pts = sampling::admissible_triple(&mut rng);
            let base = join(&plane, pts[0], pts[1], pts[2]).unwrap();
            for perm in [
                [0usize, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ] {
                let other = join(&plane, pts[perm[0]], pts[perm[1]], pts[perm[2]]).unwrap();
                let dist = circle_distance(&base.circle, &other.circle);
                assert!(dist <= 1e-8, "{dist} for {pts:?} under {perm:?}");
            }
        }
    }

    #[test]
    fn join_equivariance_under_phi_infinity() {
        let plane = PlaneSpec::classical();
        let mut rng = SplitMix64::new(0x0b5e55);
        for _ in 0..100 {
            let pts = sampling::admissible_triple(&mut rng);
            let base = join(&plane, pts[0], pts[1], pts[2]).unwrap();
            let (scale, shift, offset) = (
                rng.log_uniform(0.3, 3.0),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
            );
            let map = |p: TorusPoint| {
                let x = match p.x {
                    ER::Finite(v) => ER::Finite(v + shift),
                    ER::Infinity => ER::Infinity,
                };
                let y = match p.y {
                    ER::Finite(v) => ER::Finite(scale * v + offset),
                    ER::Infinity => ER::Infinity,
                };
                TorusPoint { x, y }
            };
            let moved = join(&plane, map(pts[0]), map(pts[1]), map(pts[2])).unwrap();
            let expected = base.circle.apply_phi_infinity(scale, shift, offset);
            let dist = circle_distance(&moved.circle, &expected);
            assert!(dist <= 1e-8, "{dist}: {:?} vs {expected:?}", moved.circle);
        }
    }

    #[test]
    fn join_rejects_parallel_points() {
        let plane = PlaneSpec::classical();
        assert_eq!(
            join(&plane, pt(1.0, 1.0), pt(1.0, 2.0), pt(2.0, 3.0)),
            Err(IncidenceError::ParallelPoints)
        );
    }

    #[test]
    fn intersect_shared_infinite_points() {
        let plane = PlaneSpec::classical();
        let c1 = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let c2 = Circle::NegCurve {
            a: 2.0,
            b: 0.0,
            c: 0.0,
        };
        let set = intersect(&plane, &c1, &c2).unwrap();
        assert_eq!(set.points.len(), 2);
        assert!(set.points.contains(&pt(0.0, INF)));
        assert!(set.points.contains(&pt(INF, 0.0)));
        assert!(!set.tangential);
    }

    #[test]
    fn intersect_touching_at_infinity() {
        // Equal a, distinct b, equal c: touching at (∞, c).
        let plane = PlaneSpec::classical();
        let c1 = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let c2 = Circle::NegCurve {
            a: 1.0,
            b: 2.0,
            c: 0.0,
        };
        let set = intersect(&plane, &c1, &c2).unwrap();
        assert_eq!(set.points, vec![pt(INF, 0.0)]);
        assert!(set.tangential);
    }

    #[test]
    fn intersect_line_curve_classical() {
        // y = −x + 2 against y = 1/x: discriminant gives x = 1 (double) —
        // shift the line to meet transversally at two points instead.
        let plane = PlaneSpec::classical();
        let curve = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let line = Circle::NegLine { s: -1.0, t: 3.0 };
        // x(3−x) = 1 → x² − 3x + 1 = 0 → x = (3 ± √5)/2, both positive.
        let set = intersect(&plane, &curve, &line).unwrap();
        assert_eq!(set.points.len(), 2);
        let expect = [(3.0 - 5.0_f64.sqrt()) / 2.0, (3.0 + 5.0_f64.sqrt()) / 2.0];
        for (p, e) in set.points.iter().zip(expect) {
            assert!((fin(p.x) - e).abs() < 1e-10);
        }

        // The tangent line at x = 1: y = −x + 2 touches at (1, 1).
        let tangent = Circle::NegLine { s: -1.0, t: 2.0 };
        let set = intersect(&plane, &curve, &tangent).unwrap();
        assert_eq!(set.points.len(), 1, "{:?}", set.points);
        assert!(set.tangential);
        assert!(point_close(set.points[0], pt(1.0, 1.0), 1e-6));
    }

    #[test]
    fn intersect_rejects_identical() {
        let plane = PlaneSpec::classical();
        let c = Circle::NegLine { s: -1.0, t: 0.0 };
        assert_eq!(
            intersect(&plane, &c, &c),
            Err(IncidenceError::IdenticalCircles)
        );
    }

    #[test]
    fn intersect_mixed_branch_pair() {
        // Convex branch of C against concave branch of D: two crossings.
        let plane = PlaneSpec::classical();
        let c = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let d = Circle::NegCurve {
            a: 1.0,
            b: -5.0,
            c: 10.0,
        };
        let set = intersect(&plane, &c, &d).unwrap();
        assert_eq!(set.points.len(), 2, "{:?}", set.points);
        for p in &set.points {
            let x = fin(p.x);
            assert!(x > 0.0 && x < 5.0);
            assert!(plane.contains(&c, *p, 1e-8) && plane.contains(&d, *p, 1e-8));
        }
    }

    #[test]
    fn cross_half_classical_crosses_twice() {
        let plane = PlaneSpec::classical();
        let neg = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let pos = Circle::PosLine { s: 1.0, t: 0.0 };
        let set = intersect(&plane, &neg, &pos).unwrap();
        assert_eq!(set.points.len(), 2);
        assert!(point_close(set.points[0], pt(-1.0, -1.0), 1e-9) || point_close(set.points[1], pt(-1.0, -1.0), 1e-9));
    }

    #[test]
    fn touch_at_branch_point_copies_a_b() {
        let plane = PlaneSpec::classical();
        let c = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let d = touch(&plane, &c, pt(0.0, INF), pt(INF, 5.0)).unwrap();
        assert_eq!(
            d,
            Circle::NegCurve {
                a: 1.0,
                b: 0.0,
                c: 5.0
            }
        );
    }

    #[test]
    fn touch_parallel_line() {
        let plane = PlaneSpec::classical();
        let c = Circle::NegLine { s: -1.0, t: 0.0 };
        let d = touch(&plane, &c, pt(INF, INF), pt(0.0, 3.0)).unwrap();
        assert_eq!(d, Circle::NegLine { s: -1.0, t: 3.0 });
    }

    #[test]
    fn touch_finite_point_concave_case() {
        // C = unit hyperbola, p = (1, 1), q = (∞, 2): the tangent circle is
        // NegCurve(1, −2, 2), meeting C only at p.
        let plane = PlaneSpec::classical();
        let c = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let d = touch(&plane, &c, pt(1.0, 1.0), pt(INF, 2.0)).unwrap();
        match d {
            Circle::NegCurve { a, b, c } => {
                assert!((a - 1.0).abs() < 1e-9);
                assert!((b + 2.0).abs() < 1e-9);
                assert!((c - 2.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
        let set = intersect(&plane, &c, &d).unwrap();
        assert_eq!(set.points.len(), 1, "{:?}", set.points);
        assert!(point_close(set.points[0], pt(1.0, 1.0), 1e-6));
        // Tangency symmetry: equal slopes at the touch point.
        let sc = plane.tangent_slope(&c, 1.0).unwrap();
        let sd = plane.tangent_slope(&d, 1.0).unwrap();
        assert!((sc - sd).abs() <= 1e-8);
    }

    #[test]
    fn touch_rejects_bad_configurations() {
        let plane = PlaneSpec::classical();
        let c = Circle::NegCurve {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        assert_eq!(
            touch(&plane, &c, pt(1.0, 2.0), pt(2.0, 3.0)),
            Err(IncidenceError::PointNotOnCircle)
        );
        assert_eq!(
            touch(&plane, &c, pt(1.0, 1.0), pt(2.0, 0.5)),
            Err(IncidenceError::PointOnCircle)
        );
        assert_eq!(
            touch(&plane, &c, pt(1.0, 1.0), pt(1.0, 3.0)),
            Err(IncidenceError::ParallelPoints)
        );
    }

    #[test]
    fn fuzz_classical_small() {
        let plane = PlaneSpec::classical();
        let report = fuzz_axioms(&plane, 150, 42);
        assert!(report.ok(), "violations: {:#?}", report.violations);
        assert!(report.checks_run["join-exist"] == 150);
    }

    #[test]
    fn fuzz_mixed_plane_small() {
        let plane = PlaneSpec::new(
            ShFunction::reciprocal_power_sum(3).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::ArcsinhReciprocal,
        );
        let report = fuzz_axioms(&plane, 80, 7);
        assert!(report.ok(), "violations: {:#?}", report.violations);
    }

    #[test]
    fn fuzz_zero_trials_empty_report() {
        let report = fuzz_axioms(&PlaneSpec::classical(), 0, 1);
        assert!(report.ok());
        assert!(report.checks_run.is_empty());
        assert_eq!(report.trials, 0);
    }
}
