//! Normalisation, power-function detection, group-dimension and Klein-Kroll
//! classification, and the isomorphism test modulo the eight coordinate
//! changes.
//!
//! A plane is normalised when f1(1) = f3(1) = 1; every plane has a
//! normalised representative with the same circle set. For normalised
//! planes the automorphism group dimension is 6 exactly for the classical
//! plane (all generators 1/x), 4 exactly for the proper power-function
//! planes f1 = x^(−r1), f2 = s1⁻¹x^(−r1), f3 = x^(−r2), f4 = s2⁻¹x^(−r2),
//! and 3 otherwise. Isomorphism between two normalised planes reduces, up
//! to the eight sign/flip coordinate changes, to the existence of r > 0
//! with g1(r)·f1(1/r) = 1 and gᵢ(x) = fᵢ(x/r) up to the shared branch
//! scalings.

use crate::circles::PlaneSpec;
use crate::functions::{geometric_grid, invert, FunctionError, ShFunction};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("the plane is not normalised (f1(1) = {0}, f3(1) = {1})")]
    NotNormalised(f64, f64),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl From<FunctionError> for ClassifyError {
    fn from(e: FunctionError) -> Self {
        ClassifyError::Numeric(e.to_string())
    }
}

/// Identity threshold for grid-based function comparison; the theorems
/// characterize planes by closed-form conditions on the generators, and
/// grid testing is the computable proxy.
const IDENTITY_TOL: f64 = 1e-8;

/// Rescales (f1, f2) by 1/f1(1) and (f3, f4) by 1/f3(1). The circle set is
/// unchanged: the factors are absorbed into the circle parameter a.
pub fn normalise(plane: &PlaneSpec) -> PlaneSpec {
    let scale_pair = |fa: &ShFunction, fb: &ShFunction| {
        let v = fa.eval(1.0);
        if (v - 1.0).abs() <= 1e-15 {
            (fa.clone(), fb.clone())
        } else {
            (
                ShFunction::scaled(1.0 / v, fa.clone()),
                ShFunction::scaled(1.0 / v, fb.clone()),
            )
        }
    };
    let (f1, f2) = scale_pair(&plane.f1, &plane.f2);
    let (f3, f4) = scale_pair(&plane.f3, &plane.f4);
    PlaneSpec::new(f1, f2, f3, f4)
}

fn require_normalised(plane: &PlaneSpec) -> Result<(), ClassifyError> {
    let (v1, v3) = (plane.f1.eval(1.0), plane.f3.eval(1.0));
    if (v1 - 1.0).abs() <= 1e-9 && (v3 - 1.0).abs() <= 1e-9 {
        Ok(())
    } else {
        Err(ClassifyError::NotNormalised(v1, v3))
    }
}

/// Zero-intercept least-squares fit of ln f against ln x on a geometric
/// grid spanning [1e−4, 1e4]: returns the exponent estimate and the worst
/// absolute log-residual.
pub fn power_fit(f: &ShFunction) -> (f64, f64) {
    let grid = geometric_grid(1e-4, 1e4, 65);
    let (mut num, mut den) = (0.0, 0.0);
    for &x in &grid {
        let (lx, ly) = (x.ln(), f.eval(x).ln());
        num += lx * ly;
        den += lx * lx;
    }
    let r = -num / den;
    let resid = grid
        .iter()
        .map(|&x| (f.eval(x).ln() + r * x.ln()).abs())
        .fold(0.0, f64::max);
    (r, resid)
}

/// Detects f(x) = x^(−r): the log-log fit must be affine with zero
/// intercept and residual below 1e−8.
pub fn detect_power(f: &ShFunction) -> Option<f64> {
    let (r, resid) = power_fit(f);
    (resid < IDENTITY_TOL && r > 0.0).then_some(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KleinKrollType {
    #[serde(rename = "VII.F.23")]
    ViiF23,
    #[serde(rename = "III.C.19")]
    IiiC19,
    #[serde(rename = "III.C.1")]
    IiiC1,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub group_dimension: u8,
    pub klein_kroll: KleinKrollType,
    /// (r1, s1, r2, s2) for power-function planes.
    pub detected_exponents: Option<(f64, f64, f64, f64)>,
    /// Worst log-residuals of the power-law fits for f1, f2/f2(1), f3,
    /// f4/f4(1).
    pub evidence: [f64; 4],
}

/// Group dimension and Klein-Kroll type of a normalised plane.
///
/// Dimension 6 iff all four generators are 1/x; dimension 4 iff the
/// generators are powers x^(−r1), s1⁻¹x^(−r1), x^(−r2), s2⁻¹x^(−r2) with
/// (r1, s1, r2, s2) ≠ (1, 1, 1, 1); dimension 3 otherwise. The Klein-Kroll
/// type is VII.F.23 for dimension 6, III.C.19 for the power planes with
/// (r, 1, r, 1), r ≠ 1, and III.C.1 in all other cases.
pub fn classify_plane(plane: &PlaneSpec) -> Result<ClassificationReport, ClassifyError> {
    require_normalised(plane)?;
    let s1 = 1.0 / plane.f2.eval(1.0);
    let s2 = 1.0 / plane.f4.eval(1.0);
    let f2n = ShFunction::scaled(s1, plane.f2.clone());
    let f4n = ShFunction::scaled(s2, plane.f4.clone());

    let fits = [
        power_fit(&plane.f1),
        power_fit(&f2n),
        power_fit(&plane.f3),
        power_fit(&f4n),
    ];
    let evidence = [fits[0].1, fits[1].1, fits[2].1, fits[3].1];
    let all_powers = evidence.iter().all(|&r| r < IDENTITY_TOL)
        && fits.iter().all(|&(r, _)| r > 0.0)
        && (fits[0].0 - fits[1].0).abs() <= IDENTITY_TOL
        && (fits[2].0 - fits[3].0).abs() <= IDENTITY_TOL;

    if all_powers {
        let (r1, r2) = (fits[0].0, fits[2].0);
        let close = |v: f64, w: f64| (v - w).abs() <= IDENTITY_TOL;
        let classical = close(r1, 1.0) && close(r2, 1.0) && close(s1, 1.0) && close(s2, 1.0);
        if classical {
            return Ok(ClassificationReport {
                group_dimension: 6,
                klein_kroll: KleinKrollType::ViiF23,
                detected_exponents: Some((r1, s1, r2, s2)),
                evidence,
            });
        }
        let hartmann_r1 = close(r1, r2) && close(s1, 1.0) && close(s2, 1.0) && !close(r1, 1.0);
        return Ok(ClassificationReport {
            group_dimension: 4,
            klein_kroll: if hartmann_r1 {
                KleinKrollType::IiiC19
            } else {
                KleinKrollType::IiiC1
            },
            detected_exponents: Some((r1, s1, r2, s2)),
            evidence,
        });
    }
    Ok(ClassificationReport {
        group_dimension: 3,
        klein_kroll: KleinKrollType::IiiC1,
        detected_exponents: None,
        evidence,
    })
}

fn is_classical(plane: &PlaneSpec) -> Result<bool, ClassifyError> {
    Ok(classify_plane(plane)?.group_dimension == 6)
}

/// The eight coordinate changes: the four sign matrices and their
/// compositions with the flip (x, y) ↦ (y, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoTransform {
    #[serde(rename = "A1")]
    A1,
    #[serde(rename = "A2")]
    A2,
    #[serde(rename = "A3")]
    A3,
    #[serde(rename = "A4")]
    A4,
    #[serde(rename = "A1'")]
    FlipA1,
    #[serde(rename = "A2'")]
    FlipA2,
    #[serde(rename = "A3'")]
    FlipA3,
    #[serde(rename = "A4'")]
    FlipA4,
}

pub const ALL_TRANSFORMS: [IsoTransform; 8] = [
    IsoTransform::A1,
    IsoTransform::A2,
    IsoTransform::A3,
    IsoTransform::A4,
    IsoTransform::FlipA1,
    IsoTransform::FlipA2,
    IsoTransform::FlipA3,
    IsoTransform::FlipA4,
];

/// Generator substitution induced by a sign matrix. Each resulting plane is
/// again normalised.
fn apply_sign_matrix(plane: &PlaneSpec, t: IsoTransform) -> PlaneSpec {
    use IsoTransform::*;
    let sc = |c: f64, f: &ShFunction| ShFunction::scaled(c, f.clone());
    match t {
        A1 | FlipA1 => plane.clone(),
        A2 | FlipA2 => {
            let (i4, i2) = (1.0 / plane.f4.eval(1.0), 1.0 / plane.f2.eval(1.0));
            PlaneSpec::new(
                sc(i4, &plane.f4),
                sc(i4, &plane.f3),
                sc(i2, &plane.f2),
                sc(i2, &plane.f1),
            )
        }
        A3 | FlipA3 => PlaneSpec::new(
            plane.f3.clone(),
            plane.f4.clone(),
            plane.f1.clone(),
            plane.f2.clone(),
        ),
        A4 | FlipA4 => {
            let (i2, i4) = (1.0 / plane.f2.eval(1.0), 1.0 / plane.f4.eval(1.0));
            PlaneSpec::new(
                sc(i2, &plane.f2),
                sc(i2, &plane.f1),
                sc(i4, &plane.f4),
                sc(i4, &plane.f3),
            )
        }
    }
}

/// Generator substitution induced by the flip (x, y) ↦ (y, x): inverse
/// functions, with the positive pair swapped and rescaled to normalised
/// form through the numeric inverse.
fn apply_flip(plane: &PlaneSpec) -> Result<PlaneSpec, ClassifyError> {
    let e = invert(&plane.f4, 1.0)?;
    let inv = |f: &ShFunction| ShFunction::inverse(f.clone());
    Ok(PlaneSpec::new(
        inv(&plane.f1),
        inv(&plane.f2),
        ShFunction::scaled(1.0 / e, inv(&plane.f4)),
        ShFunction::scaled(1.0 / e, inv(&plane.f3)),
    ))
}

fn transform_plane(plane: &PlaneSpec, t: IsoTransform) -> Result<PlaneSpec, ClassifyError> {
    use IsoTransform::*;
    let signed = apply_sign_matrix(plane, t);
    match t {
        A1 | A2 | A3 | A4 => Ok(signed),
        FlipA1 | FlipA2 | FlipA3 | FlipA4 => apply_flip(&signed),
    }
}

/// A verified isomorphism witness: the coordinate change, the x-scaling
/// r, and the worst relative deviation of the four rescaling identities on
/// the verification grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsoWitness {
    pub transform: IsoTransform,
    pub r: f64,
    pub residual: f64,
}

const WITNESS_TOL: f64 = 1e-6;

/// Worst relative deviation of g_i(x) = f_i(x/r)/den_i over the grid, with
/// den_1 = f1(1/r) shared by the negative pair and den_3 = f3(1/r) by the
/// positive pair.
fn rescale_residual(f: &PlaneSpec, g: &PlaneSpec, r: f64) -> f64 {
    let den1 = f.f1.eval(1.0 / r);
    let den3 = f.f3.eval(1.0 / r);
    let grid = geometric_grid(1e-3, 1e3, 64);
    let mut worst = 0.0_f64;
    for (gf, ff, den) in [
        (&g.f1, &f.f1, den1),
        (&g.f2, &f.f2, den1),
        (&g.f3, &f.f3, den3),
        (&g.f4, &f.f4, den3),
    ] {
        for &x in &grid {
            let lhs = gf.eval(x);
            let rhs = ff.eval(x / r) / den;
            let dev = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
            worst = worst.max(dev);
        }
    }
    worst
}

/// Candidate r values solving g1(r)·f1(1/r) = 1: every sign change over the
/// sweep of dyadic brackets [2^k, 2^(k+1)], k ∈ [−40, 40], plus any sweep
/// point already solving the equation (the identity case r = 1 gives an
/// identically-zero residual function, which has no sign changes).
fn candidate_rs(f: &PlaneSpec, g: &PlaneSpec) -> Vec<f64> {
    let u = |r: f64| g.f1.eval(r) * f.f1.eval(1.0 / r) - 1.0;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in -40..=40 {
        let r = 2.0_f64.powi(k);
        let v = u(r);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if v.abs() <= 1e-12 {
            out.push(r);
            prev = Some((r, v));
            continue;
        }
        if let Some((pr, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                out.push(crate::solve::bisect(&u, (pr, r)));
            }
        }
        prev = Some((r, v));
    }
    out
}

/// Searches for an isomorphism between two normalised planes: classicality
/// is handled first (isomorphisms moving (∞, ∞) exist only between
/// classical planes), then each of the eight transforms of planeG is tested
/// for an x-scaling r satisfying the rescaling identities. The first
/// verified witness in the fixed transform order wins.
pub fn isomorphic(
    plane_f: &PlaneSpec,
    plane_g: &PlaneSpec,
) -> Result<Option<IsoWitness>, ClassifyError> {
    require_normalised(plane_f)?;
    require_normalised(plane_g)?;
    let (cf, cg) = (is_classical(plane_f)?, is_classical(plane_g)?);
    if cf != cg {
        return Ok(None);
    }
    if cf && cg {
        return Ok(Some(IsoWitness {
            transform: IsoTransform::A1,
            r: 1.0,
            residual: rescale_residual(plane_f, plane_g, 1.0),
        }));
    }
    for t in ALL_TRANSFORMS {
        let g_t = transform_plane(plane_g, t)?;
        for r in candidate_rs(plane_f, &g_t) {
            let residual = rescale_residual(plane_f, &g_t, r);
            if residual <= WITNESS_TOL {
                return Ok(Some(IsoWitness {
                    transform: t,
                    r,
                    residual,
                }));
            }
        }
    }
    Ok(None)
}

/// The condition-(I) transform of a normalised plane with parameter r:
/// g_i(x) = f_i(x/r)/den with den = f1(1/r) for the negative pair and
/// f3(1/r) for the positive pair. The result is normalised and isomorphic
/// to the input via (x, y) ↦ (rx, y).
pub fn rescale_plane(plane: &PlaneSpec, r: f64) -> PlaneSpec {
    assert!(r > 0.0);
    let den1 = plane.f1.eval(1.0 / r);
    let den3 = plane.f3.eval(1.0 / r);
    let build = |f: &ShFunction, den: f64| {
        ShFunction::scaled(1.0 / den, ShFunction::arg_scaled(r, f.clone()))
    };
    PlaneSpec::new(
        build(&plane.f1, den1),
        build(&plane.f2, den1),
        build(&plane.f3, den3),
        build(&plane.f4, den3),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_plane() -> PlaneSpec {
        PlaneSpec::new(
            ShFunction::ReciprocalXPlusArctan,
            ShFunction::ArcsinhReciprocal,
            ShFunction::reciprocal_power_sum(3).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
        )
    }

    #[test]
    fn normalise_scales_both_pair_members() {
        let plane = PlaneSpec::new(
            ShFunction::scaled(2.0, ShFunction::reciprocal_power(1).unwrap()),
            ShFunction::reciprocal_power(2).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
        );
        let n = normalise(&plane);
        assert!(n.normalised);
        assert!((n.f1.eval(1.0) - 1.0).abs() < 1e-15);
        // f2 is scaled by the same factor 1/f1(1) = 1/2.
        assert!((n.f2.eval(2.0) - 0.5 * 0.25).abs() < 1e-15);
        // Idempotent, and exactly so on already-normalised planes.
        let again = normalise(&n);
        assert_eq!(again, n);
    }

    #[test]
    fn normalise_power_sum() {
        let plane = PlaneSpec::new(
            ShFunction::reciprocal_power_sum(2).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(1).unwrap(),
        );
        let n = normalise(&plane);
        // f1(1) = 2, so the pair is scaled by 1/2.
        assert!((n.f1.eval(1.0) - 1.0).abs() < 1e-15);
        assert!((n.f1.eval(2.0) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn detect_power_examples() {
        assert!((detect_power(&ShFunction::reciprocal_power(1).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let r = detect_power(&ShFunction::hartmann_power(2.5).unwrap()).unwrap();
        assert!((r - 2.5).abs() < 1e-10);
        assert_eq!(detect_power(&ShFunction::ReciprocalXPlusArctan), None);
    }

    #[test]
    fn detect_power_random_exponents() {
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..100 {
            let r = rng.log_uniform(0.1, 10.0);
            let f = ShFunction::hartmann_power(r).unwrap();
            let got = detect_power(&f).unwrap();
            assert!((got - r).abs() <= 1e-10, "r = {r}, got {got}");
        }
    }

    #[test]
    fn classify_matrix() {
        // Classical.
        let rep = classify_plane(&PlaneSpec::classical()).unwrap();
        assert_eq!(rep.group_dimension, 6);
        assert_eq!(rep.klein_kroll, KleinKrollType::ViiF23);

        // Hartmann power quadruple with exponent 2.
        let h = ShFunction::hartmann_power(2.0).unwrap();
        let rep = classify_plane(&PlaneSpec::new(h.clone(), h.clone(), h.clone(), h.clone()))
            .unwrap();
        assert_eq!(rep.group_dimension, 4);
        assert_eq!(rep.klein_kroll, KleinKrollType::IiiC19);
        let (r1, s1, r2, s2) = rep.detected_exponents.unwrap();
        assert!((r1 - 2.0).abs() < 1e-8 && (r2 - 2.0).abs() < 1e-8);
        assert!((s1 - 1.0).abs() < 1e-8 && (s2 - 1.0).abs() < 1e-8);

        // s1 = 2 breaks the (r,1;r,1) pattern: dimension 4, type III.C.1.
        let rep = classify_plane(&PlaneSpec::new(
            h.clone(),
            ShFunction::scaled(0.5, h.clone()),
            h.clone(),
            h.clone(),
        ))
        .unwrap();
        assert_eq!(rep.group_dimension, 4);
        assert_eq!(rep.klein_kroll, KleinKrollType::IiiC1);
        let (_, s1, _, _) = rep.detected_exponents.unwrap();
        assert!((s1 - 2.0).abs() < 1e-8);

        // Mixed plane: dimension 3.
        let rep = classify_plane(&normalise(&mixed_plane())).unwrap();
        assert_eq!(rep.group_dimension, 3);
        assert_eq!(rep.klein_kroll, KleinKrollType::IiiC1);
        assert_eq!(rep.detected_exponents, None);
    }

    #[test]
    fn classify_requires_normalised() {
        let err = classify_plane(&mixed_plane());
        assert!(matches!(err, Err(ClassifyError::NotNormalised(_, _))));
    }

    #[test]
    fn isomorphic_identity() {
        let p = normalise(&mixed_plane());
        let w = isomorphic(&p, &p).unwrap().expect("identity witness");
        assert_eq!(w.transform, IsoTransform::A1);
        assert!((w.r - 1.0).abs() <= 1e-9);
        assert!(w.residual <= 1e-9);
    }

    #[test]
    fn isomorphic_recovers_rescaling() {
        let p = normalise(&mixed_plane());
        let g = rescale_plane(&p, 2.0);
        let w = isomorphic(&p, &g).unwrap().expect("rescaling witness");
        // Accept either orientation of the recovered scaling.
        assert!(
            (w.r - 2.0).abs() <= 1e-6 || (w.r - 0.5).abs() <= 1e-6,
            "r = {}",
            w.r
        );
        assert!(w.residual <= WITNESS_TOL);
    }

    #[test]
    fn isomorphic_rejects_distinct_planes() {
        let classical = PlaneSpec::classical();
        let mixed = normalise(&mixed_plane());
        assert!(isomorphic(&classical, &mixed).unwrap().is_none());
        assert!(isomorphic(&mixed, &classical).unwrap().is_none());
    }

    #[test]
    fn isomorphic_is_symmetric_on_test_planes() {
        let h2 = ShFunction::hartmann_power(2.0).unwrap();
        let planes = [
            PlaneSpec::classical(),
            normalise(&mixed_plane()),
            PlaneSpec::new(h2.clone(), h2.clone(), h2.clone(), h2.clone()),
            rescale_plane(&normalise(&mixed_plane()), 3.0),
        ];
        for (i, f) in planes.iter().enumerate() {
            for (j, g) in planes.iter().enumerate() {
                let fg = isomorphic(f, g).unwrap().is_some();
                let gf = isomorphic(g, f).unwrap().is_some();
                assert_eq!(fg, gf, "asymmetry between planes {i} and {j}");
                if i == j {
                    assert!(fg, "plane {i} not isomorphic to itself");
                }
            }
        }
    }

    #[test]
    fn flip_transform_detects_inverse_plane() {
        // The flip sends each generator to its inverse; a plane built from
        // the numeric inverses must be recognised as isomorphic.
        let p = normalise(&PlaneSpec::new(
            ShFunction::ArcsinhReciprocal,
            ShFunction::ArcsinhReciprocal,
            ShFunction::reciprocal_power(2).unwrap(),
            ShFunction::reciprocal_power(2).unwrap(),
        ));
        let flipped = apply_flip(&p).unwrap();
        assert!((flipped.f1.eval(1.0) - 1.0).abs() <= 1e-9);
        let w = isomorphic(&flipped, &p).unwrap().expect("flip witness");
        assert!(matches!(
            w.transform,
            IsoTransform::FlipA1 | IsoTransform::FlipA2 | IsoTransform::FlipA3 | IsoTransform::FlipA4
        ));
    }

    #[test]
    fn classification_invariant_under_rescaling() {
        let p = normalise(&mixed_plane());
        let g = rescale_plane(&p, 2.5);
        let a = classify_plane(&p).unwrap();
        let b = classify_plane(&g).unwrap();
        assert_eq!(a.group_dimension, b.group_dimension);
        assert_eq!(a.klein_kroll, b.klein_kroll);

        let h2 = ShFunction::hartmann_power(2.0).unwrap();
        let hp = PlaneSpec::new(h2.clone(), h2.clone(), h2.clone(), h2.clone());
        let hg = rescale_plane(&hp, 0.7);
        assert_eq!(classify_plane(&hg).unwrap().group_dimension, 4);
    }
}
