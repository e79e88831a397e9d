//! Circles of both halves, their evaluation with branch logic, membership,
//! tangent slopes, and the Φ∞ group action.
//!
//! A negative-half curve with parameters a > 0, b, c is the graph of
//!
//! ```text
//! x ↦ a·f1(x + b) + c   for x > −b   (convex branch)
//! x ↦ −a·f2(−x − b) + c for x < −b   (concave branch)
//! ```
//!
//! completed by the two points (−b, ∞) and (∞, c); a negative-half line is
//! the Euclidean line y = s·x + t with s < 0 completed by (∞, ∞). The
//! positive half is the image of the negative one under the mirror
//! φ: (x, y) ↦ (−x, y), built over the second function pair (f3, f4).

use crate::functions::ShFunction;
use crate::torus::{ExtendedReal, Half, TorusPoint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CircleError {
    #[error("invalid circle: {0}")]
    Invalid(String),
    #[error("x = {0} is the branch point; the tangent slope is undefined there")]
    BranchPoint(f64),
}

/// A circle of the constructed plane, as a parameter record. The generator
/// functions are supplied by the [`PlaneSpec`] the circle belongs to:
/// negative-half curves evaluate through (f1, f2), positive-half ones
/// through (f3, f4).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleRepr", into = "CircleRepr")]
pub enum Circle {
    NegCurve { a: f64, b: f64, c: f64 },
    NegLine { s: f64, t: f64 },
    PosCurve { a: f64, b: f64, c: f64 },
    PosLine { s: f64, t: f64 },
}

#[derive(Serialize, Deserialize)]
struct CircleRepr {
    half: Half,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
}

impl TryFrom<CircleRepr> for Circle {
    type Error = String;

    fn try_from(r: CircleRepr) -> Result<Self, String> {
        let num = |v: Option<f64>, name: &str| -> Result<f64, String> {
            match v {
                Some(v) if v.is_finite() => Ok(v),
                Some(v) => Err(format!("parameter {name} must be finite, got {v}")),
                None => Err(format!("missing parameter {name}")),
            }
        };
        match r.kind.as_str() {
            "curve" => {
                let (a, b, c) = (num(r.a, "a")?, num(r.b, "b")?, num(r.c, "c")?);
                if a <= 0.0 {
                    return Err(format!("curve parameter a must be positive, got {a}"));
                }
                Ok(match r.half {
                    Half::Neg => Circle::NegCurve { a, b, c },
                    Half::Pos => Circle::PosCurve { a, b, c },
                })
            }
            "line" => {
                let (s, t) = (num(r.s, "s")?, num(r.t, "t")?);
                match r.half {
                    Half::Neg if s < 0.0 => Ok(Circle::NegLine { s, t }),
                    Half::Pos if s > 0.0 => Ok(Circle::PosLine { s, t }),
                    _ => Err(format!("line slope {s} has the wrong sign for its half")),
                }
            }
            other => Err(format!("unknown circle kind {other:?}")),
        }
    }
}

impl From<Circle> for CircleRepr {
    fn from(c: Circle) -> Self {
        let (half, kind, a, b, cc, s, t) = match c {
            Circle::NegCurve { a, b, c } => (Half::Neg, "curve", Some(a), Some(b), Some(c), None, None),
            Circle::NegLine { s, t } => (Half::Neg, "line", None, None, None, Some(s), Some(t)),
            Circle::PosCurve { a, b, c } => (Half::Pos, "curve", Some(a), Some(b), Some(c), None, None),
            Circle::PosLine { s, t } => (Half::Pos, "line", None, None, None, Some(s), Some(t)),
        };
        CircleRepr {
            half,
            kind: kind.to_owned(),
            a,
            b,
            c: cc,
            s,
            t,
        }
    }
}

impl Circle {
    pub fn half(&self) -> Half {
        match self {
            Circle::NegCurve { .. } | Circle::NegLine { .. } => Half::Neg,
            Circle::PosCurve { .. } | Circle::PosLine { .. } => Half::Pos,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, Circle::NegLine { .. } | Circle::PosLine { .. })
    }

    /// The points of the circle outside the Euclidean chart: (−b, ∞) and
    /// (∞, c) for a negative curve, (b, ∞) and (∞, c) for a positive one,
    /// (∞, ∞) for a line.
    pub fn infinite_points(&self) -> Vec<TorusPoint> {
        match *self {
            Circle::NegCurve { b, c, .. } => vec![
                TorusPoint::new(-b, ExtendedReal::Infinity),
                TorusPoint::new(ExtendedReal::Infinity, c),
            ],
            Circle::PosCurve { b, c, .. } => vec![
                TorusPoint::new(b, ExtendedReal::Infinity),
                TorusPoint::new(ExtendedReal::Infinity, c),
            ],
            Circle::NegLine { .. } | Circle::PosLine { .. } => vec![TorusPoint::infinity()],
        }
    }

    /// Image under the mirror φ: (x, y) ↦ (−x, y); an involution on the
    /// parameter records.
    pub fn mirror(&self) -> Circle {
        match *self {
            Circle::NegCurve { a, b, c } => Circle::PosCurve { a, b, c },
            Circle::PosCurve { a, b, c } => Circle::NegCurve { a, b, c },
            Circle::NegLine { s, t } => Circle::PosLine { s: -s, t },
            Circle::PosLine { s, t } => Circle::NegLine { s: -s, t },
        }
    }

    /// Image under the Φ∞ element (x, y) ↦ (x + shift, scale·y + offset),
    /// scale > 0. Every constructed plane admits these maps as
    /// automorphisms, so the image is again a circle of the same half.
    pub fn apply_phi_infinity(&self, scale: f64, shift: f64, offset: f64) -> Circle {
        assert!(scale > 0.0, "Φ∞ y-scale must be positive");
        match *self {
            Circle::NegCurve { a, b, c } => Circle::NegCurve {
                a: scale * a,
                b: b - shift,
                c: scale * c + offset,
            },
            Circle::PosCurve { a, b, c } => Circle::PosCurve {
                a: scale * a,
                b: b + shift,
                c: scale * c + offset,
            },
            Circle::NegLine { s, t } => Circle::NegLine {
                s: scale * s,
                t: scale * (t - s * shift) + offset,
            },
            Circle::PosLine { s, t } => Circle::PosLine {
                s: scale * s,
                t: scale * (t - s * shift) + offset,
            },
        }
    }
}

/// The quadruple (f1, f2; f3, f4) defining a plane: (f1, f2) generate the
/// negative half, (f3, f4) the mirrored positive half.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneSpec {
    pub f1: ShFunction,
    pub f2: ShFunction,
    pub f3: ShFunction,
    pub f4: ShFunction,
    pub normalised: bool,
}

impl PlaneSpec {
    pub fn new(f1: ShFunction, f2: ShFunction, f3: ShFunction, f4: ShFunction) -> Self {
        let normalised = (f1.eval(1.0) - 1.0).abs() <= 1e-12 && (f3.eval(1.0) - 1.0).abs() <= 1e-12;
        PlaneSpec {
            f1,
            f2,
            f3,
            f4,
            normalised,
        }
    }

    /// The classical plane: all four generators x ↦ 1/x.
    pub fn classical() -> Self {
        let f = ShFunction::ReciprocalPower { i: 1 };
        PlaneSpec::new(f.clone(), f.clone(), f.clone(), f)
    }

    /// Generator pair for the given half: (f1, f2) or (f3, f4).
    pub fn pair(&self, half: Half) -> (&ShFunction, &ShFunction) {
        match half {
            Half::Neg => (&self.f1, &self.f2),
            Half::Pos => (&self.f3, &self.f4),
        }
    }

    /// Evaluates the circle as a function S¹ → S¹ at x. Total: the branch
    /// point maps to ∞, ∞ maps to the centre value, and float overflow near
    /// the branch point saturates to ∞.
    pub fn eval_circle(&self, circle: &Circle, x: ExtendedReal) -> ExtendedReal {
        match *circle {
            Circle::NegCurve { a, b, c } => {
                let (f1, f2) = self.pair(Half::Neg);
                match x {
                    ExtendedReal::Infinity => ExtendedReal::Finite(c),
                    ExtendedReal::Finite(x) if x > -b => (a * f1.eval(x + b) + c).into(),
                    ExtendedReal::Finite(x) if x < -b => (-a * f2.eval(-x - b) + c).into(),
                    ExtendedReal::Finite(_) => ExtendedReal::Infinity,
                }
            }
            Circle::NegLine { s, t } => match x {
                ExtendedReal::Finite(x) => (s * x + t).into(),
                ExtendedReal::Infinity => ExtendedReal::Infinity,
            },
            Circle::PosCurve { a, b, c } => {
                let (f3, f4) = self.pair(Half::Pos);
                match x {
                    ExtendedReal::Infinity => ExtendedReal::Finite(c),
                    ExtendedReal::Finite(x) if x < b => (a * f3.eval(b - x) + c).into(),
                    ExtendedReal::Finite(x) if x > b => (-a * f4.eval(x - b) + c).into(),
                    ExtendedReal::Finite(_) => ExtendedReal::Infinity,
                }
            }
            Circle::PosLine { s, t } => match x {
                ExtendedReal::Finite(x) => (s * x + t).into(),
                ExtendedReal::Infinity => ExtendedReal::Infinity,
            },
        }
    }

    /// Relative distance of p from the circle: 0 for its infinite points,
    /// |eval(x) − y|/(1 + |y|) on the chart, ∞ for points that cannot lie
    /// on it.
    pub fn membership_residual(&self, circle: &Circle, p: TorusPoint) -> f64 {
        match (p.x, p.y) {
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => {
                match self.eval_circle(circle, p.x) {
                    ExtendedReal::Finite(v) => (v - y).abs() / (1.0 + y.abs()),
                    ExtendedReal::Infinity => {
                        // x sits at (or overflows into) the branch point.
                        let _ = x;
                        f64::INFINITY
                    }
                }
            }
            (ExtendedReal::Finite(x), ExtendedReal::Infinity) => match *circle {
                Circle::NegCurve { b, .. } => (x + b).abs() / (1.0 + b.abs()),
                Circle::PosCurve { b, .. } => (x - b).abs() / (1.0 + b.abs()),
                _ => f64::INFINITY,
            },
            (ExtendedReal::Infinity, ExtendedReal::Finite(y)) => match *circle {
                Circle::NegCurve { c, .. } | Circle::PosCurve { c, .. } => {
                    (c - y).abs() / (1.0 + y.abs())
                }
                _ => f64::INFINITY,
            },
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => {
                if circle.is_line() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn contains(&self, circle: &Circle, p: TorusPoint, tol: f64) -> bool {
        self.membership_residual(circle, p) <= tol
    }

    /// Slope of the branch through x. Curve branches have strictly negative
    /// slopes in the negative half and strictly positive ones in the
    /// positive half.
    pub fn tangent_slope(&self, circle: &Circle, x: f64) -> Result<f64, CircleError> {
        match *circle {
            Circle::NegCurve { a, b, .. } => {
                let (f1, f2) = self.pair(Half::Neg);
                if x > -b {
                    Ok(a * f1.deriv(x + b))
                } else if x < -b {
                    Ok(a * f2.deriv(-x - b))
                } else {
                    Err(CircleError::BranchPoint(x))
                }
            }
            Circle::NegLine { s, .. } | Circle::PosLine { s, .. } => Ok(s),
            Circle::PosCurve { a, b, .. } => {
                let (f3, f4) = self.pair(Half::Pos);
                if x < b {
                    Ok(-a * f3.deriv(b - x))
                } else if x > b {
                    Ok(-a * f4.deriv(x - b))
                } else {
                    Err(CircleError::BranchPoint(x))
                }
            }
        }
    }
}
