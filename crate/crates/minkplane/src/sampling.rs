//! Random generators for points, triples, and circles, used by the
//! randomized axiom checker and the acceptance suite. Samplers enforce a
//! minimum coordinate separation so that solver conditioning stays sane.

use crate::circles::{Circle, PlaneSpec};
use crate::rng::SplitMix64;
use crate::torus::{parallel, AdmissibleType, ExtendedReal, Half, TorusPoint};

pub(crate) const MIN_SEP: f64 = 0.05;

pub(crate) fn finite_coord(rng: &mut SplitMix64) -> f64 {
    rng.uniform(-3.0, 3.0)
}

fn coord(rng: &mut SplitMix64, p_inf: f64) -> ExtendedReal {
    if rng.chance(p_inf) {
        ExtendedReal::Infinity
    } else {
        ExtendedReal::Finite(finite_coord(rng))
    }
}

pub(crate) fn general_point(rng: &mut SplitMix64) -> TorusPoint {
    TorusPoint {
        x: coord(rng, 0.12),
        y: coord(rng, 0.12),
    }
}

fn separated(a: ExtendedReal, b: ExtendedReal) -> bool {
    match (a, b) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a - b).abs() >= MIN_SEP,
        // One of them at ∞: the finite samplers stay within ±3, so the
        // chart separation is automatic.
        _ => a != b,
    }
}

fn well_separated(pts: &[TorusPoint; 3]) -> bool {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if parallel(pts[i], pts[j])
                || !separated(pts[i].x, pts[j].x)
                || !separated(pts[i].y, pts[j].y)
            {
                return false;
            }
        }
    }
    true
}

/// A pairwise nonparallel, well-separated triple (admissible for one of the
/// two halves; every nonparallel triple is).
pub(crate) fn admissible_triple(rng: &mut SplitMix64) -> [TorusPoint; 3] {
    loop {
        let pts = [
            general_point(rng),
            general_point(rng),
            general_point(rng),
        ];
        if well_separated(&pts) {
            return pts;
        }
    }
}

/// A well-separated triple with the infinity pattern of the requested
/// admissible type (canonical role order), joinable by whichever half its
/// orientations select.
pub(crate) fn triple_of_type(rng: &mut SplitMix64, kind: AdmissibleType) -> [TorusPoint; 3] {
    let inf = ExtendedReal::Infinity;
    loop {
        let f = |rng: &mut SplitMix64| ExtendedReal::Finite(finite_coord(rng));
        let pts = match kind {
            AdmissibleType::Type1 => [
                TorusPoint::infinity(),
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: f(rng) },
            ],
            AdmissibleType::Type2 => [
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: inf, y: f(rng) },
                TorusPoint { x: f(rng), y: inf },
            ],
            AdmissibleType::Type3 => [
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: inf },
            ],
            AdmissibleType::Type4 => [
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: inf, y: f(rng) },
            ],
            AdmissibleType::Type5 => [
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: f(rng) },
                TorusPoint { x: f(rng), y: f(rng) },
            ],
        };
        if well_separated(&pts) {
            return pts;
        }
    }
}

pub(crate) fn curve_of_half(rng: &mut SplitMix64, half: Half) -> Circle {
    let a = rng.log_uniform(0.25, 4.0);
    let b = finite_coord(rng);
    let c = finite_coord(rng);
    match half {
        Half::Neg => Circle::NegCurve { a, b, c },
        Half::Pos => Circle::PosCurve { a, b, c },
    }
}

pub(crate) fn line_of_half(rng: &mut SplitMix64, half: Half) -> Circle {
    let slope = rng.log_uniform(0.25, 4.0);
    let t = finite_coord(rng);
    match half {
        Half::Neg => Circle::NegLine { s: -slope, t },
        Half::Pos => Circle::PosLine { s: slope, t },
    }
}

pub(crate) fn circle_of_half(rng: &mut SplitMix64, half: Half) -> Circle {
    if rng.chance(0.7) {
        curve_of_half(rng, half)
    } else {
        line_of_half(rng, half)
    }
}

pub(crate) fn any_circle(rng: &mut SplitMix64) -> Circle {
    let half = if rng.chance(0.5) { Half::Neg } else { Half::Pos };
    circle_of_half(rng, half)
}

/// A point on the circle: one of its infinite points, or a finite point at
/// a branch offset bounded away from the pole.
pub(crate) fn point_on_circle(
    plane: &PlaneSpec,
    rng: &mut SplitMix64,
    circle: &Circle,
) -> TorusPoint {
    if rng.chance(0.25) {
        let infs = circle.infinite_points();
        return infs[rng.index(infs.len())];
    }
    let x = match *circle {
        Circle::NegCurve { b, .. } => {
            let off = rng.log_uniform(0.1, 10.0);
            if rng.chance(0.5) {
                -b + off
            } else {
                -b - off
            }
        }
        Circle::PosCurve { b, .. } => {
            let off = rng.log_uniform(0.1, 10.0);
            if rng.chance(0.5) {
                b + off
            } else {
                b - off
            }
        }
        Circle::NegLine { .. } | Circle::PosLine { .. } => finite_coord(rng),
    };
    let y = plane.eval_circle(circle, ExtendedReal::Finite(x));
    TorusPoint {
        x: ExtendedReal::Finite(x),
        y,
    }
}
