//! Points of the torus S¹ × S¹ with S¹ = R ∪ {∞}, parallelism, cyclic
//! orientation, and admissible-position classification of point triples.
//!
//! Circles of a flat Minkowski plane are graphs of homeomorphisms of S¹.
//! A triple of pairwise nonparallel points is joinable by the negative half
//! (orientation-reversing graphs) exactly when the cyclic orientation of its
//! x-coordinates is opposite to that of its y-coordinates, and by the
//! positive half when the orientations agree. Admissible triples fall into
//! five types according to which coordinates are infinite.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A coordinate on S¹, modeled as R ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtendedRealRepr", into = "ExtendedRealRepr")]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtendedRealRepr {
    Num(f64),
    Word(String),
}

impl TryFrom<ExtendedRealRepr> for ExtendedReal {
    type Error = String;

    fn try_from(repr: ExtendedRealRepr) -> Result<Self, String> {
        match repr {
            ExtendedRealRepr::Num(v) if v.is_finite() => Ok(ExtendedReal::Finite(v)),
            ExtendedRealRepr::Num(v) => Err(format!("non-finite coordinate {v}")),
            ExtendedRealRepr::Word(w) if w == "inf" => Ok(ExtendedReal::Infinity),
            ExtendedRealRepr::Word(w) => Err(format!("unknown coordinate keyword {w:?}")),
        }
    }
}

impl From<ExtendedReal> for ExtendedRealRepr {
    fn from(x: ExtendedReal) -> Self {
        match x {
            ExtendedReal::Finite(v) => ExtendedRealRepr::Num(v),
            ExtendedReal::Infinity => ExtendedRealRepr::Word("inf".to_owned()),
        }
    }
}

impl ExtendedReal {
    pub const INF: ExtendedReal = ExtendedReal::Infinity;

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }

    /// Chart angle t ↦ 2·atan(t) in (−π, π], with ∞ ↦ π.
    pub fn angle(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => 2.0 * v.atan(),
            ExtendedReal::Infinity => std::f64::consts::PI,
        }
    }

    /// Mirror x ↦ −x; fixes ∞.
    pub fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::Infinity => ExtendedReal::Infinity,
        }
    }
}

/// Maps ±∞ floats to the point at infinity; NaN is rejected by callers that
/// construct points, so this conversion keeps eval paths total.
impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            ExtendedReal::Finite(v)
        } else {
            ExtendedReal::Infinity
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => write!(f, "inf"),
        }
    }
}

/// A point of the torus. Any combination of finite/infinite coordinates is
/// legal, including (∞, ∞).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: ExtendedReal,
    pub y: ExtendedReal,
}

impl TorusPoint {
    pub fn new(x: impl Into<ExtendedReal>, y: impl Into<ExtendedReal>) -> Self {
        TorusPoint {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn infinity() -> Self {
        TorusPoint {
            x: ExtendedReal::Infinity,
            y: ExtendedReal::Infinity,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Image under the mirror φ: (x, y) ↦ (−x, y).
    pub fn mirror(&self) -> TorusPoint {
        TorusPoint {
            x: self.x.neg(),
            y: self.y,
        }
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Which half of the circle set: graphs of orientation-reversing (negative)
/// or orientation-preserving (positive) homeomorphisms of S¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Neg,
    Pos,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("degenerate triple: two of the three S¹ coordinates coincide")]
    DegenerateTriple,
    #[error("two of the points are parallel")]
    ParallelPoints,
}

/// True iff p and q lie on a common vertical {x₀} × S¹.
pub fn parallel_plus(p: TorusPoint, q: TorusPoint) -> bool {
    p.x == q.x
}

/// True iff p and q lie on a common horizontal S¹ × {y₀}.
pub fn parallel_minus(p: TorusPoint, q: TorusPoint) -> bool {
    p.y == q.y
}

pub fn parallel(p: TorusPoint, q: TorusPoint) -> bool {
    parallel_plus(p, q) || parallel_minus(p, q)
}

/// Orientation of the triple (a, b, c) on S¹: +1 if counterclockwise under
/// the chart t ↦ 2·atan(t) (∞ ↦ π), −1 otherwise.
pub fn cyclic_orientation(
    a: ExtendedReal,
    b: ExtendedReal,
    c: ExtendedReal,
) -> Result<i8, TorusError> {
    if a == b || b == c || a == c {
        return Err(TorusError::DegenerateTriple);
    }
    let tau = 2.0 * std::f64::consts::PI;
    let ta = a.angle();
    let u = (b.angle() - ta).rem_euclid(tau);
    let v = (c.angle() - ta).rem_euclid(tau);
    if u == v {
        // Distinct coordinates whose chart angles collide in f64 (only
        // possible for astronomically large values).
        return Err(TorusError::DegenerateTriple);
    }
    Ok(if u < v { 1 } else { -1 })
}

/// The five admissible-position types of a joinable triple, by which
/// coordinates are infinite (canonical roles p₁, p₂, p₃):
///
/// 1. p₁ = (∞, ∞), p₂, p₃ finite;
/// 2. p₁ finite, p₂ = (∞, y₂), p₃ = (x₃, ∞);
/// 3. p₁, p₂ finite, p₃ = (x₃, ∞);
/// 4. p₁, p₂ finite, p₃ = (∞, y₃);
/// 5. all three finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdmissibleType {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
}

/// Result of classifying a joinable triple: the type together with the
/// permutation sending input positions to canonical roles. `perm[k]` is the
/// index (0-based) of the input point playing canonical role p_{k+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePosition {
    pub kind: AdmissibleType,
    pub perm: [usize; 3],
}

fn matches_template(kind: AdmissibleType, q: [TorusPoint; 3]) -> bool {
    let fin = |p: TorusPoint| p.is_finite();
    match kind {
        AdmissibleType::Type1 => q[0] == TorusPoint::infinity() && fin(q[1]) && fin(q[2]),
        AdmissibleType::Type2 => {
            fin(q[0]) && !q[1].x.is_finite() && q[1].y.is_finite() && q[2].x.is_finite()
                && !q[2].y.is_finite()
        }
        AdmissibleType::Type3 => {
            fin(q[0]) && fin(q[1]) && q[2].x.is_finite() && !q[2].y.is_finite()
        }
        AdmissibleType::Type4 => {
            fin(q[0]) && fin(q[1]) && !q[2].x.is_finite() && q[2].y.is_finite()
        }
        AdmissibleType::Type5 => fin(q[0]) && fin(q[1]) && fin(q[2]),
    }
}

const PERMS_LEX: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Classifies a pairwise nonparallel triple for the given half.
///
/// Returns `None` when the triple is joinable only by the other half. The
/// role permutation is the lexicographically first one matching the type
/// template.
pub fn classify_admissible(
    p1: TorusPoint,
    p2: TorusPoint,
    p3: TorusPoint,
    half: Half,
) -> Result<Option<AdmissiblePosition>, TorusError> {
    let pts = [p1, p2, p3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if parallel(pts[i], pts[j]) {
                return Err(TorusError::ParallelPoints);
            }
        }
    }
    let ox = cyclic_orientation(p1.x, p2.x, p3.x)?;
    let oy = cyclic_orientation(p1.y, p2.y, p3.y)?;
    let joinable = match half {
        Half::Neg => ox != oy,
        Half::Pos => ox == oy,
    };
    if !joinable {
        return Ok(None);
    }
    for kind in [
        AdmissibleType::Type1,
        AdmissibleType::Type2,
        AdmissibleType::Type3,
        AdmissibleType::Type4,
        AdmissibleType::Type5,
    ] {
        for perm in PERMS_LEX {
            if matches_template(kind, [pts[perm[0]], pts[perm[1]], pts[perm[2]]]) {
                return Ok(Some(AdmissiblePosition { kind, perm }));
            }
        }
    }
    // Pairwise nonparallel triples always match exactly one template.
    unreachable!("nonparallel triple matched no admissible template");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: impl Into<ExtendedReal>, y: impl Into<ExtendedReal>) -> TorusPoint {
        TorusPoint::new(x, y)
    }

    const INF: ExtendedReal = ExtendedReal::Infinity;

    /// Independent orientation oracle: the sign of the determinant
    /// |cos θ  sin θ  1| over the three chart images on the unit circle.
    fn orientation_oracle(a: ExtendedReal, b: ExtendedReal, c: ExtendedReal) -> i8 {
        let (ta, tb, tc) = (a.angle(), b.angle(), c.angle());
        let det = (tb.cos() - ta.cos()) * (tc.sin() - ta.sin())
            - (tc.cos() - ta.cos()) * (tb.sin() - ta.sin());
        if det > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Second independent oracle: the purely combinatorial cyclic-order rule
    /// on R ∪ {∞}, no chart involved.
    fn orientation_combinatorial(a: ExtendedReal, b: ExtendedReal, c: ExtendedReal) -> i8 {
        use ExtendedReal::*;
        let ccw = match (a, b, c) {
            (Finite(a), Finite(b), Finite(c)) => {
                (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
            }
            (Finite(a), Finite(b), Infinity) => a < b,
            (Finite(a), Infinity, Finite(c)) => c < a,
            (Infinity, Finite(b), Finite(c)) => b < c,
            _ => unreachable!("two infinite coordinates"),
        };
        if ccw {
            1
        } else {
            -1
        }
    }

    #[test]
    fn parallels() {
        assert!(parallel_plus(pt(1.0, 2.0), pt(1.0, 5.0)));
        assert!(parallel_plus(pt(INF, 2.0), pt(INF, INF)));
        assert!(!parallel_plus(pt(1.0, 2.0), pt(2.0, 2.0)));

        assert!(parallel_minus(pt(1.0, 2.0), pt(5.0, 2.0)));
        assert!(parallel_minus(pt(1.0, INF), pt(INF, INF)));
        assert!(!parallel_minus(pt(1.0, 2.0), pt(1.0, 3.0)));
    }

    #[test]
    fn orientation_examples() {
        // Derived via the chart-determinant oracle.
        let zero = ExtendedReal::Finite(0.0);
        let one = ExtendedReal::Finite(1.0);
        assert_eq!(orientation_oracle(zero, one, INF), 1);
        assert_eq!(cyclic_orientation(zero, one, INF).unwrap(), 1);
        assert_eq!(orientation_oracle(zero, INF, one), -1);
        assert_eq!(cyclic_orientation(zero, INF, one).unwrap(), -1);
        // Increasing finite reals are counterclockwise.
        let two = ExtendedReal::Finite(2.0);
        let three = ExtendedReal::Finite(3.0);
        assert_eq!(cyclic_orientation(one, two, three).unwrap(), 1);
    }

    #[test]
    fn orientation_rejects_degenerate() {
        let one = ExtendedReal::Finite(1.0);
        assert_eq!(
            cyclic_orientation(one, one, INF),
            Err(TorusError::DegenerateTriple)
        );
    }

    #[test]
    fn orientation_matches_oracles_on_random_triples() {
        let mut rng = crate::rng::SplitMix64::new(0x0123_4567);
        for _ in 0..10_000 {
            let coord = |r: &mut crate::rng::SplitMix64| {
                if r.chance(0.1) {
                    INF
                } else {
                    ExtendedReal::Finite(r.uniform(-50.0, 50.0))
                }
            };
            let (a, b, c) = (coord(&mut rng), coord(&mut rng), coord(&mut rng));
            if a == b || b == c || a == c {
                continue;
            }
            let got = cyclic_orientation(a, b, c).unwrap();
            assert_eq!(got, orientation_oracle(a, b, c));
            assert_eq!(got, orientation_combinatorial(a, b, c));
            // Cyclic rotation invariance, transposition antisymmetry.
            assert_eq!(got, cyclic_orientation(b, c, a).unwrap());
            assert_eq!(got, cyclic_orientation(c, a, b).unwrap());
            assert_eq!(-got, cyclic_orientation(b, a, c).unwrap());
        }
    }

    #[test]
    fn admissible_type1_example() {
        let got = classify_admissible(pt(INF, INF), pt(0.0, 1.0), pt(1.0, 0.0), Half::Neg)
            .unwrap()
            .unwrap();
        assert_eq!(got.kind, AdmissibleType::Type1);
        assert_eq!(got.perm, [0, 1, 2]);
    }

    #[test]
    fn admissible_type2_example() {
        let got = classify_admissible(pt(1.0, 1.0), pt(INF, 0.0), pt(0.0, INF), Half::Neg)
            .unwrap()
            .unwrap();
        assert_eq!(got.kind, AdmissibleType::Type2);
        assert_eq!(got.perm, [0, 1, 2]);
    }

    #[test]
    fn diagonal_triple_is_positive_half_only() {
        // x- and y-orientations agree: an orientation-preserving graph.
        let r = classify_admissible(pt(1.0, 1.0), pt(2.0, 2.0), pt(3.0, 3.0), Half::Neg).unwrap();
        assert_eq!(r, None);
        let r = classify_admissible(pt(1.0, 1.0), pt(2.0, 2.0), pt(3.0, 3.0), Half::Pos)
            .unwrap()
            .unwrap();
        assert_eq!(r.kind, AdmissibleType::Type5);
    }

    #[test]
    fn parallel_points_rejected() {
        assert_eq!(
            classify_admissible(pt(1.0, 1.0), pt(1.0, 2.0), pt(3.0, 3.0), Half::Neg),
            Err(TorusError::ParallelPoints)
        );
    }

    #[test]
    fn admissible_for_exactly_one_half() {
        let mut rng = crate::rng::SplitMix64::new(0xace0_fba5e);
        let mut seen = 0;
        while seen < 2000 {
            let coord = |r: &mut crate::rng::SplitMix64| {
                if r.chance(0.12) {
                    INF
                } else {
                    ExtendedReal::Finite(r.uniform(-10.0, 10.0))
                }
            };
            let p = [
                pt(coord(&mut rng), coord(&mut rng)),
                pt(coord(&mut rng), coord(&mut rng)),
                pt(coord(&mut rng), coord(&mut rng)),
            ];
            if parallel(p[0], p[1]) || parallel(p[1], p[2]) || parallel(p[0], p[2]) {
                continue;
            }
            seen += 1;
            let neg = classify_admissible(p[0], p[1], p[2], Half::Neg).unwrap();
            let pos = classify_admissible(p[0], p[1], p[2], Half::Pos).unwrap();
            assert!(neg.is_some() ^ pos.is_some());
            // The joinability verdict is permutation-invariant.
            for perm in PERMS_LEX {
                let n2 =
                    classify_admissible(p[perm[0]], p[perm[1]], p[perm[2]], Half::Neg).unwrap();
                assert_eq!(neg.is_some(), n2.is_some());
            }
        }
    }

    #[test]
    fn point_json_round_trip() {
        let p = pt(1.5, INF);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"x":1.5,"y":"inf"}"#);
        let back: TorusPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let err = serde_json::from_str::<TorusPoint>(r#"{"x":"nope","y":1}"#);
        assert!(err.is_err());
    }
}
