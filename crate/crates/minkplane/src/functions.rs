//! Strongly hyperbolic functions: the built-in catalog and a numerical
//! checker for the five defining conditions.
//!
//! A strongly hyperbolic function f: R⁺ → R⁺ satisfies
//!
//! 1. f(x) → +∞ as x → 0⁺ and f(x) → 0 as x → +∞,
//! 2. f is strictly convex,
//! 3. f(x+b)/f(x) → 1 as x → +∞ for every fixed b,
//! 4. f is differentiable,
//! 5. ln|f′| is strictly convex.
//!
//! Such a function is strictly decreasing and a bijection of R⁺. Conditions
//! 1 and 3 are limits, so the checker certifies residual trends at a finite
//! horizon rather than proofs; condition 2 and 5 are checked through second
//! divided differences with a cancellation-aware noise floor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FunctionError {
    #[error("unknown function name {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

/// Arguments this close to the domain's open end are clipped before
/// evaluation, so eval paths stay total on (0, ∞).
const ARG_GUARD: f64 = 1e-300;

/// A strongly hyperbolic function with analytic derivative, optional closed
/// inverse, and compositional wrappers used by normalisation and the
/// isomorphism machinery.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShFunction {
    /// x ↦ x⁻ⁱ for a positive integer i.
    ReciprocalPower { i: u32 },
    /// x ↦ Σ_{k=1..n} x⁻ᵏ.
    ReciprocalPowerSum { n: u32 },
    /// x ↦ 1/(x + arctan x).
    ReciprocalXPlusArctan,
    /// x ↦ ln(1/x + √(1/x² + 1)) = asinh(1/x).
    ArcsinhReciprocal,
    /// x ↦ 1/sinh x. A known non-example: the shift-ratio limit is e⁻ᵇ ≠ 1.
    ReciprocalSinh,
    /// x ↦ x⁻ʳ for real r > 0.
    HartmannPower { r: f64 },
    /// x ↦ c·f(x), c > 0.
    Scaled { c: f64, f: Box<ShFunction> },
    /// x ↦ f(x/r), r > 0.
    ArgScaled { r: f64, f: Box<ShFunction> },
    /// x ↦ f⁻¹(x), evaluated through the closed inverse when available and
    /// by bisection otherwise.
    Inverse { f: Box<ShFunction> },
}

impl ShFunction {
    pub fn reciprocal_power(i: u32) -> Result<Self, FunctionError> {
        let f = ShFunction::ReciprocalPower { i };
        f.validate()?;
        Ok(f)
    }

    pub fn reciprocal_power_sum(n: u32) -> Result<Self, FunctionError> {
        let f = ShFunction::ReciprocalPowerSum { n };
        f.validate()?;
        Ok(f)
    }

    pub fn hartmann_power(r: f64) -> Result<Self, FunctionError> {
        let f = ShFunction::HartmannPower { r };
        f.validate()?;
        Ok(f)
    }

    /// c·f with nested scalings collapsed; c = 1 returns f unchanged.
    pub fn scaled(c: f64, f: ShFunction) -> ShFunction {
        if c == 1.0 {
            return f;
        }
        match f {
            ShFunction::Scaled { c: c0, f } => ShFunction::Scaled { c: c * c0, f },
            other => ShFunction::Scaled {
                c,
                f: Box::new(other),
            },
        }
    }

    pub fn arg_scaled(r: f64, f: ShFunction) -> ShFunction {
        if r == 1.0 {
            return f;
        }
        ShFunction::ArgScaled { r, f: Box::new(f) }
    }

    pub fn inverse(f: ShFunction) -> ShFunction {
        match f {
            ShFunction::Inverse { f } => *f,
            other => ShFunction::Inverse { f: Box::new(other) },
        }
    }

    pub fn validate(&self) -> Result<(), FunctionError> {
        match self {
            ShFunction::ReciprocalPower { i } => {
                if !(1..=1000).contains(i) {
                    return Err(FunctionError::BadParam(format!(
                        "reciprocal_power exponent i must be in 1..=1000, got {i}"
                    )));
                }
            }
            ShFunction::ReciprocalPowerSum { n } => {
                if !(1..=1000).contains(n) {
                    return Err(FunctionError::BadParam(format!(
                        "reciprocal_power_sum order n must be in 1..=1000, got {n}"
                    )));
                }
            }
            ShFunction::HartmannPower { r } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(FunctionError::BadParam(format!(
                        "hartmann_power exponent r must be positive, got {r}"
                    )));
                }
            }
            ShFunction::Scaled { c, f } => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(FunctionError::BadParam(format!(
                        "scale factor must be positive, got {c}"
                    )));
                }
                f.validate()?;
            }
            ShFunction::ArgScaled { r, f } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(FunctionError::BadParam(format!(
                        "argument scale must be positive, got {r}"
                    )));
                }
                f.validate()?;
            }
            ShFunction::Inverse { f } => f.validate()?,
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            ShFunction::ReciprocalPower { i } => format!("reciprocal_power({i})"),
            ShFunction::ReciprocalPowerSum { n } => format!("reciprocal_power_sum({n})"),
            ShFunction::ReciprocalXPlusArctan => "reciprocal_x_plus_arctan".to_owned(),
            ShFunction::ArcsinhReciprocal => "arcsinh_reciprocal".to_owned(),
            ShFunction::ReciprocalSinh => "reciprocal_sinh".to_owned(),
            ShFunction::HartmannPower { r } => format!("hartmann_power({r})"),
            ShFunction::Scaled { c, f } => format!("{c}*{}", f.name()),
            ShFunction::ArgScaled { r, f } => format!("{}(x/{r})", f.name()),
            ShFunction::Inverse { f } => format!("inverse({})", f.name()),
        }
    }

    /// Evaluates f at x > 0. Arguments below the guard are clipped; results
    /// may overflow to +∞ near 0, which callers map to the point at infinity.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.max(ARG_GUARD);
        match self {
            ShFunction::ReciprocalPower { i } => x.powi(-(*i as i32)),
            ShFunction::ReciprocalPowerSum { n } => {
                let u = 1.0 / x;
                let mut acc = 0.0;
                for _ in 0..*n {
                    acc = u * (1.0 + acc);
                }
                acc
            }
            ShFunction::ReciprocalXPlusArctan => 1.0 / (x + x.atan()),
            ShFunction::ArcsinhReciprocal => (1.0 / x).asinh(),
            ShFunction::ReciprocalSinh => 1.0 / x.sinh(),
            ShFunction::HartmannPower { r } => x.powf(-r),
            ShFunction::Scaled { c, f } => c * f.eval(x),
            ShFunction::ArgScaled { r, f } => f.eval(x / r),
            ShFunction::Inverse { f } => invert(f, x).unwrap_or(f64::NAN),
        }
    }

    /// Analytic derivative f′(x) < 0.
    pub fn deriv(&self, x: f64) -> f64 {
        let x = x.max(ARG_GUARD);
        match self {
            ShFunction::ReciprocalPower { i } => {
                let i = *i as f64;
                -i * x.powf(-i - 1.0)
            }
            ShFunction::ReciprocalPowerSum { n } => {
                let u = 1.0 / x;
                let mut acc = 0.0;
                for k in (1..=*n).rev() {
                    acc = acc * u + k as f64;
                }
                // acc = Σ k·u^{k-1} evaluated by Horner, highest power first.
                -acc * u * u
            }
            ShFunction::ReciprocalXPlusArctan => {
                let g = x + x.atan();
                -(1.0 + 1.0 / (1.0 + x * x)) / (g * g)
            }
            ShFunction::ArcsinhReciprocal => -1.0 / (x * (x * x + 1.0).sqrt()),
            ShFunction::ReciprocalSinh => {
                let s = x.sinh();
                -x.cosh() / (s * s)
            }
            ShFunction::HartmannPower { r } => -r * x.powf(-r - 1.0),
            ShFunction::Scaled { c, f } => c * f.deriv(x),
            ShFunction::ArgScaled { r, f } => f.deriv(x / r) / r,
            ShFunction::Inverse { f } => {
                let x0 = self.eval(x);
                1.0 / f.deriv(x0)
            }
        }
    }

    /// Closed-form inverse where one exists.
    fn inverse_closed(&self, y: f64) -> Option<f64> {
        match self {
            ShFunction::ReciprocalPower { i } => Some(y.powf(-1.0 / *i as f64)),
            ShFunction::ReciprocalPowerSum { n } if *n == 1 => Some(1.0 / y),
            ShFunction::ArcsinhReciprocal => Some(1.0 / y.sinh()),
            ShFunction::ReciprocalSinh => Some((1.0 / y).asinh()),
            ShFunction::HartmannPower { r } => Some(y.powf(-1.0 / r)),
            ShFunction::Scaled { c, f } => f.inverse_closed(y / c),
            ShFunction::ArgScaled { r, f } => f.inverse_closed(y).map(|x| r * x),
            ShFunction::Inverse { f } => Some(f.eval(y)),
            _ => None,
        }
    }
}

/// Solves f(x) = y for x > 0: through the closed inverse when present, else
/// by bisection on a bracket grown geometrically from both ends (valid since
/// f is a decreasing bijection of R⁺).
pub fn invert(f: &ShFunction, y: f64) -> Result<f64, FunctionError> {
    if !(y.is_finite() && y > 0.0) {
        return Err(FunctionError::BadParam(format!(
            "invert target must be a positive real, got {y}"
        )));
    }
    if let Some(x) = f.inverse_closed(y) {
        return Ok(x);
    }
    let mut lo = 1.0_f64;
    let mut steps = 0;
    while f.eval(lo) < y {
        lo /= 4.0;
        steps += 1;
        if steps > 520 {
            return Err(FunctionError::NoConvergence(
                "invert: no lower bracket".into(),
            ));
        }
    }
    let mut hi = 1.0_f64;
    steps = 0;
    while f.eval(hi) > y {
        hi *= 4.0;
        steps += 1;
        if steps > 520 {
            return Err(FunctionError::NoConvergence(
                "invert: no upper bracket".into(),
            ));
        }
    }
    // Bisect in log space; f(e^t) is decreasing in t.
    let mut tl = lo.ln();
    let mut th = hi.ln();
    let mut x = (0.5 * (tl + th)).exp();
    for _ in 0..300 {
        let tm = 0.5 * (tl + th);
        x = tm.exp();
        let v = f.eval(x);
        if v > y {
            tl = tm;
        } else {
            th = tm;
        }
        if th - tl < 1e-18 {
            break;
        }
    }
    if (f.eval(x) - y).abs() <= 1e-12 * y.max(1.0) {
        Ok(x)
    } else {
        Err(FunctionError::NoConvergence(format!(
            "invert: residual {} at x = {x}",
            f.eval(x) - y
        )))
    }
}

/// Builds a catalog member by name. `param` carries the exponent/order where
/// one is required and must be absent otherwise.
pub fn catalog(name: &str, param: Option<f64>) -> Result<ShFunction, FunctionError> {
    let int_param = |p: Option<f64>| -> Result<u32, FunctionError> {
        match p {
            Some(v) if v.fract() == 0.0 && v >= 1.0 && v <= 1000.0 => Ok(v as u32),
            other => Err(FunctionError::BadParam(format!(
                "expected a positive integer parameter, got {other:?}"
            ))),
        }
    };
    match name {
        "reciprocal_power" => ShFunction::reciprocal_power(int_param(param)?),
        "reciprocal_power_sum" => ShFunction::reciprocal_power_sum(int_param(param)?),
        "reciprocal_x_plus_arctan" => Ok(ShFunction::ReciprocalXPlusArctan),
        "arcsinh_reciprocal" => Ok(ShFunction::ArcsinhReciprocal),
        "reciprocal_sinh" => Ok(ShFunction::ReciprocalSinh),
        "hartmann_power" => match param {
            Some(r) => ShFunction::hartmann_power(r),
            None => Err(FunctionError::BadParam(
                "hartmann_power requires an exponent".into(),
            )),
        },
        other => Err(FunctionError::UnknownName(other.to_owned())),
    }
}

/// Grid and tolerance settings for the numerical checker.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckerConfig {
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub limit_b_values: Vec<f64>,
    pub tolerance: f64,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            grid_min: 1e-4,
            grid_max: 1e8,
            grid_points: 512,
            limit_b_values: vec![0.5, 1.0, 3.0],
            tolerance: 1e-3,
        }
    }
}

impl CheckerConfig {
    pub fn validate(&self) -> Result<(), FunctionError> {
        if !(self.grid_min.is_finite() && self.grid_min > 0.0) {
            return Err(FunctionError::BadParam("grid_min must be > 0".into()));
        }
        if !(self.grid_max.is_finite() && self.grid_max > self.grid_min) {
            return Err(FunctionError::BadParam(
                "grid_max must exceed grid_min".into(),
            ));
        }
        if self.grid_points < 16 {
            return Err(FunctionError::BadParam("grid_points must be >= 16".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(FunctionError::BadParam("tolerance must be > 0".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        geometric_grid(self.grid_min, self.grid_max, self.grid_points)
    }
}

pub(crate) fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (ll, lh) = (lo.ln(), hi.ln());
    (0..n)
        .map(|j| {
            // Exact endpoints: the horizon x = grid_max is reported as given.
            if j == 0 {
                lo
            } else if j == n - 1 {
                hi
            } else {
                (ll + (lh - ll) * j as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Verdict for one of the five defining conditions. The residual semantics
/// depend on the condition: margin above the noise floor for the convexity
/// conditions, worst |ratio − 1| for the limit conditions, worst relative
/// error for the derivative check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub pass: bool,
    pub worst_residual: f64,
    pub witness: Option<f64>,
}

/// Measured shift ratio f(x+b)/f(x) for condition 3.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitRatio {
    pub b: f64,
    pub x: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub conditions: [ConditionVerdict; 5],
    pub limit_ratios: Vec<LimitRatio>,
    pub overall: bool,
}

/// Values this small are treated as underflow and excluded from ratio and
/// difference tests.
const VALUE_FLOOR: f64 = 1e-290;

fn usable(v: f64) -> bool {
    v.is_finite() && v > VALUE_FLOOR
}

/// Second divided differences of (xs, vs) must all clear a noise floor
/// proportional to the cancellation error of the stencil. Returns
/// (pass, worst margin, witness x).
fn strict_convexity(xs: &[f64], vs: &[f64]) -> (bool, f64, Option<f64>) {
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut checked = 0usize;
    for w in 0..xs.len().saturating_sub(2) {
        let (x0, x1, x2) = (xs[w], xs[w + 1], xs[w + 2]);
        let (f0, f1, f2) = (vs[w], vs[w + 1], vs[w + 2]);
        if !(f0.is_finite() && f1.is_finite() && f2.is_finite()) {
            continue;
        }
        let d01 = (f1 - f0) / (x1 - x0);
        let d12 = (f2 - f1) / (x2 - x1);
        let dd = (d12 - d01) / (x2 - x0);
        let noise = 512.0 * f64::EPSILON * (f0.abs() + f1.abs() + f2.abs())
            / ((x1 - x0).min(x2 - x1) * (x2 - x0));
        let margin = dd - noise;
        checked += 1;
        if margin < worst {
            worst = margin;
            witness = Some(x1);
        }
    }
    if checked < 8 {
        return (false, f64::NEG_INFINITY, None);
    }
    (worst > 0.0, worst, witness)
}

/// Largest grid point at which all the listed offsets give usable values.
fn usable_horizon(f: &ShFunction, grid: &[f64], offsets: &[f64]) -> Option<f64> {
    grid.iter().rev().copied().find(|&x| {
        usable(f.eval(x))
            && f.deriv(x).is_finite()
            && offsets
                .iter()
                .all(|&b| x + b > 0.0 && usable(f.eval(x + b)))
    })
}

/// Numerically checks the five conditions of the definition on a geometric
/// grid. Conditions 1 and 3 are limits: the verdicts certify a divergence
/// witness and a residual trend at the horizon, not the limit itself.
pub fn check_strongly_hyperbolic(
    f: &ShFunction,
    cfg: &CheckerConfig,
) -> Result<CheckReport, FunctionError> {
    cfg.validate()?;
    let grid = cfg.grid();
    let tol = cfg.tolerance;
    let scale = f.eval(1.0).max(1.0);

    // Condition 1: f → ∞ at 0⁺ (difference over the lowest decade keeps
    // growing) and f → 0 at ∞ (value at the horizon is negligible).
    let cond1 = {
        let x0 = cfg.grid_min;
        let x1 = (10.0 * x0).min(cfg.grid_max);
        let grow = f.eval(x0) - f.eval(x1) - tol * scale;
        let horizon = usable_horizon(f, &grid, &[]);
        let decay = match horizon {
            Some(x) => tol * scale - f.eval(x),
            None => f64::NEG_INFINITY,
        };
        let worst = grow.min(decay);
        ConditionVerdict {
            pass: worst > 0.0,
            worst_residual: worst,
            witness: Some(if grow < decay {
                x0
            } else {
                horizon.unwrap_or(cfg.grid_max)
            }),
        }
    };

    // Condition 2: strict convexity of f.
    let values: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();
    let (p2, w2, wit2) = strict_convexity(&grid, &values);
    let cond2 = ConditionVerdict {
        pass: p2,
        worst_residual: w2,
        witness: wit2,
    };

    // Condition 3: shift ratios at the horizon.
    let mut limit_ratios = Vec::new();
    let mut worst3 = 0.0_f64;
    let mut wit3 = None;
    let mut pass3 = true;
    for &b in &cfg.limit_b_values {
        if cfg.grid_max + b <= 0.0 {
            return Err(FunctionError::Domain(format!(
                "shift b = {b} pushes the horizon x = {} out of the domain",
                cfg.grid_max
            )));
        }
        match usable_horizon(f, &grid, &[b]) {
            Some(x) => {
                let ratio = f.eval(x + b) / f.eval(x);
                let resid = (ratio - 1.0).abs();
                let pass = resid <= tol;
                if resid > worst3 {
                    worst3 = resid;
                    wit3 = Some(b);
                }
                pass3 &= pass;
                limit_ratios.push(LimitRatio { b, x, ratio, pass });
            }
            None => {
                pass3 = false;
                worst3 = f64::INFINITY;
                wit3 = Some(b);
            }
        }
    }
    let cond3 = ConditionVerdict {
        pass: pass3,
        worst_residual: worst3,
        witness: wit3,
    };

    // Condition 4: the supplied derivative matches symmetric differences
    // with scale-aware step h = x·1e−6.
    let cond4 = {
        let mut worst = 0.0_f64;
        let mut witness = None;
        let mut checked = 0usize;
        for &x in &grid {
            let h = x * 1e-6;
            let (fp, fm, d) = (f.eval(x + h), f.eval(x - h), f.deriv(x));
            if !(usable(fp) && usable(fm) && d.is_finite()) {
                continue;
            }
            let fd = (fp - fm) / (2.0 * h);
            let rel = (fd - d).abs() / d.abs().max(1e-300);
            checked += 1;
            if rel > worst {
                worst = rel;
                witness = Some(x);
            }
        }
        ConditionVerdict {
            pass: checked >= 8 && worst <= tol,
            worst_residual: worst,
            witness,
        }
    };

    // Condition 5: f′ < 0 everywhere sampled and ln|f′| strictly convex.
    let cond5 = {
        let mut xs = Vec::with_capacity(grid.len());
        let mut ls = Vec::with_capacity(grid.len());
        let mut sign_violation = None;
        for &x in &grid {
            let d = f.deriv(x);
            if !d.is_finite() {
                continue;
            }
            if d >= 0.0 {
                sign_violation = Some(x);
                break;
            }
            xs.push(x);
            ls.push((-d).ln());
        }
        if let Some(x) = sign_violation {
            ConditionVerdict {
                pass: false,
                worst_residual: f64::NEG_INFINITY,
                witness: Some(x),
            }
        } else {
            let (p, w, wit) = strict_convexity(&xs, &ls);
            ConditionVerdict {
                pass: p,
                worst_residual: w,
                witness: wit,
            }
        }
    };

    let conditions = [cond1, cond2, cond3, cond4, cond5];
    let overall = conditions.iter().all(|c| c.pass);
    Ok(CheckReport {
        conditions,
        limit_ratios,
        overall,
    })
}

/// Numerical witnesses for the five limit statements that follow from the
/// definition, evaluated at the largest usable horizon X of the grid:
///
/// 1. f′(X)/f′(X+b) ≈ 1;
/// 2. f′(X)/f(X) ≈ 0;
/// 3. (f(X+s) − f(X))/f′(X) ≈ s;
/// 4. (f(X+s) − f(X))/(f(X+t) − f(X)) ≈ s/t;
/// 5. f′/f attains values below −1/tolerance near the left end of the grid
///    (a divergence witness for liminf = −∞).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitLemmaReport {
    pub x: f64,
    /// (b, f′(X)/f′(X+b))
    pub derivative_shift_ratios: Vec<(f64, f64)>,
    pub derivative_over_value: f64,
    /// (s, (f(X+s) − f(X))/f′(X))
    pub difference_over_derivative: Vec<(f64, f64)>,
    /// (s, t, (f(X+s) − f(X))/(f(X+t) − f(X)))
    pub difference_ratios: Vec<(f64, f64, f64)>,
    /// min of f′/f over the lowest grid decade
    pub log_derivative_min: f64,
    pub passes: [bool; 5],
    pub overall: bool,
}

/// Requires a function that already passes [`check_strongly_hyperbolic`];
/// the offsets s, t are taken from `cfg.limit_b_values`.
pub fn check_limit_lemma(
    f: &ShFunction,
    cfg: &CheckerConfig,
) -> Result<LimitLemmaReport, FunctionError> {
    cfg.validate()?;
    let grid = cfg.grid();
    let tol = cfg.tolerance;
    let offsets = &cfg.limit_b_values;
    for &b in offsets {
        if cfg.grid_max + b <= 0.0 {
            return Err(FunctionError::Domain(format!(
                "offset {b} leaves the domain at the horizon"
            )));
        }
    }
    let x = usable_horizon(f, &grid, offsets).ok_or_else(|| {
        FunctionError::Domain("no usable horizon point on the grid".to_owned())
    })?;

    let mut derivative_shift_ratios = Vec::new();
    let mut pass1 = true;
    for &b in offsets {
        let ratio = f.deriv(x) / f.deriv(x + b);
        pass1 &= (ratio - 1.0).abs() <= tol;
        derivative_shift_ratios.push((b, ratio));
    }

    let derivative_over_value = f.deriv(x) / f.eval(x);
    let pass2 = derivative_over_value.abs() <= tol;

    let mut difference_over_derivative = Vec::new();
    let mut pass3 = true;
    for &s in offsets {
        let ratio = (f.eval(x + s) - f.eval(x)) / f.deriv(x);
        pass3 &= (ratio / s - 1.0).abs() <= tol;
        difference_over_derivative.push((s, ratio));
    }

    let mut difference_ratios = Vec::new();
    let mut pass4 = true;
    for &s in offsets {
        for &t in offsets {
            let ratio = (f.eval(x + s) - f.eval(x)) / (f.eval(x + t) - f.eval(x));
            pass4 &= (ratio * t / s - 1.0).abs() <= tol;
            difference_ratios.push((s, t, ratio));
        }
    }

    let low_cut = cfg.grid_min * 10.0;
    let log_derivative_min = grid
        .iter()
        .filter(|&&x| x <= low_cut)
        .map(|&x| f.deriv(x) / f.eval(x))
        .fold(f64::INFINITY, f64::min);
    let pass5 = log_derivative_min < -1.0 / tol;

    let passes = [pass1, pass2, pass3, pass4, pass5];
    Ok(LimitLemmaReport {
        x,
        derivative_shift_ratios,
        derivative_over_value,
        difference_over_derivative,
        difference_ratios,
        log_derivative_min,
        passes,
        overall: passes.iter().all(|&p| p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passing_catalog() -> Vec<ShFunction> {
        vec![
            ShFunction::reciprocal_power(1).unwrap(),
            ShFunction::reciprocal_power(2).unwrap(),
            ShFunction::reciprocal_power(3).unwrap(),
            ShFunction::reciprocal_power_sum(2).unwrap(),
            ShFunction::reciprocal_power_sum(3).unwrap(),
            ShFunction::ReciprocalXPlusArctan,
            ShFunction::ArcsinhReciprocal,
            ShFunction::hartmann_power(2.0).unwrap(),
            ShFunction::hartmann_power(2.5).unwrap(),
        ]
    }

    #[test]
    fn catalog_values() {
        assert_eq!(catalog("reciprocal_power", Some(1.0)).unwrap().eval(2.0), 0.5);
        assert_eq!(
            catalog("reciprocal_power_sum", Some(2.0)).unwrap().eval(2.0),
            0.75
        );
        assert!(matches!(
            catalog("no_such_fn", None),
            Err(FunctionError::UnknownName(_))
        ));
        assert!(matches!(
            catalog("reciprocal_power", Some(0.0)),
            Err(FunctionError::BadParam(_))
        ));
        assert!(matches!(
            catalog("hartmann_power", Some(-2.0)),
            Err(FunctionError::BadParam(_))
        ));
    }

    #[test]
    fn arcsinh_reciprocal_inverse_is_reciprocal_sinh() {
        let f = ShFunction::ArcsinhReciprocal;
        for y in [0.3, 1.0, 2.5] {
            let x = invert(&f, y).unwrap();
            assert!((x - 1.0 / y.sinh()).abs() <= 1e-12 * x.abs());
        }
    }

    #[test]
    fn invert_examples() {
        let f2 = ShFunction::reciprocal_power(2).unwrap();
        assert!((invert(&f2, 4.0).unwrap() - 0.5).abs() < 1e-14);

        let fa = ShFunction::ArcsinhReciprocal;
        assert!((invert(&fa, 1.0).unwrap() - 0.850_918_1).abs() < 1e-6);

        // Round trip through a function without a closed inverse.
        let fr = ShFunction::ReciprocalXPlusArctan;
        let y = fr.eval(3.0);
        let x = invert(&fr, y).unwrap();
        assert!((x - 3.0).abs() <= 1e-9 * 3.0);
    }

    #[test]
    fn invert_round_trip_random() {
        let mut rng = crate::rng::SplitMix64::new(0xfeed);
        for f in passing_catalog() {
            for _ in 0..120 {
                let x = rng.log_uniform(1e-3, 1e3);
                let y = f.eval(x);
                let back = invert(&f, y).unwrap();
                assert!(
                    (back - x).abs() <= 1e-9 * x,
                    "{} at x={x}: back={back}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn strict_monotonicity_sampled() {
        for f in passing_catalog() {
            let grid = geometric_grid(1e-3, 1e3, 200);
            for w in grid.windows(2) {
                assert!(f.eval(w[0]) > f.eval(w[1]), "{} not decreasing", f.name());
                assert!(f.deriv(w[0]) < 0.0);
            }
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        for f in passing_catalog() {
            for x in geometric_grid(1e-2, 1e4, 160) {
                let h = x * 1e-6;
                let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                let d = f.deriv(x);
                assert!(
                    (fd - d).abs() <= 1e-6 * d.abs(),
                    "{} at x={x}: fd={fd} d={d}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn checker_passes_catalog_and_fails_reciprocal_sinh() {
        let cfg = CheckerConfig::default();
        for f in passing_catalog() {
            let report = check_strongly_hyperbolic(&f, &cfg).unwrap();
            assert!(
                report.overall,
                "{} failed: {:?}",
                f.name(),
                report.conditions
            );
        }
        let report = check_strongly_hyperbolic(&ShFunction::ReciprocalSinh, &cfg).unwrap();
        assert!(!report.overall);
        assert!(!report.conditions[2].pass, "condition 3 must fail");
    }

    #[test]
    fn reciprocal_sinh_shift_ratio_at_30() {
        // At horizon X = 30 the measured ratio f(X+1)/f(X) is e⁻¹.
        let cfg = CheckerConfig {
            grid_min: 1e-4,
            grid_max: 30.0,
            grid_points: 256,
            limit_b_values: vec![1.0],
            tolerance: 1e-3,
        };
        let report = check_strongly_hyperbolic(&ShFunction::ReciprocalSinh, &cfg).unwrap();
        assert!(!report.conditions[2].pass);
        let lr = &report.limit_ratios[0];
        assert_eq!(lr.x, 30.0);
        assert!((lr.ratio - (-1.0_f64).exp()).abs() <= 1e-4);
    }

    #[test]
    fn checker_domain_error_for_large_negative_shift() {
        let cfg = CheckerConfig {
            grid_max: 10.0,
            limit_b_values: vec![-20.0],
            ..CheckerConfig::default()
        };
        let err = check_strongly_hyperbolic(&ShFunction::reciprocal_power(1).unwrap(), &cfg);
        assert!(matches!(err, Err(FunctionError::Domain(_))));
    }

    #[test]
    fn limit_lemma_reciprocal() {
        let f = ShFunction::reciprocal_power(1).unwrap();
        let cfg = CheckerConfig {
            grid_max: 1e6,
            limit_b_values: vec![2.0, 1.0],
            tolerance: 1e-3,
            ..CheckerConfig::default()
        };
        let report = check_limit_lemma(&f, &cfg).unwrap();
        assert!(report.overall, "{report:?}");
        let x = report.x;
        assert_eq!(x, 1e6);

        // Independent direct evaluation of the part-4 ratio at s=2, t=1.
        let direct = (f.eval(x + 2.0) - f.eval(x)) / (f.eval(x + 1.0) - f.eval(x));
        let (_, _, got) = report
            .difference_ratios
            .iter()
            .copied()
            .find(|&(s, t, _)| s == 2.0 && t == 1.0)
            .unwrap();
        assert_eq!(got, direct);
        assert!((got - 2.0).abs() <= 1e-4 * 2.0);

        // Part 1 at b = 1.
        let (_, r1) = report
            .derivative_shift_ratios
            .iter()
            .copied()
            .find(|&(b, _)| b == 1.0)
            .unwrap();
        assert!((r1 - 1.0).abs() <= 1e-4);

        // s = t gives ratio exactly 1.
        let (_, _, rtt) = report
            .difference_ratios
            .iter()
            .copied()
            .find(|&(s, t, _)| s == 1.0 && t == 1.0)
            .unwrap();
        assert_eq!(rtt, 1.0);
    }

    #[test]
    fn limit_lemma_rejects_reciprocal_sinh_part1() {
        // Not strongly hyperbolic: f'(X)/f'(X+b) → e^b ≠ 1.
        let cfg = CheckerConfig {
            grid_max: 50.0,
            limit_b_values: vec![1.0],
            ..CheckerConfig::default()
        };
        let report = check_limit_lemma(&ShFunction::ReciprocalSinh, &cfg).unwrap();
        assert!(!report.passes[0]);
    }

    #[test]
    fn function_json_round_trip() {
        let f = ShFunction::scaled(
            0.5,
            ShFunction::arg_scaled(2.0, ShFunction::reciprocal_power(2).unwrap()),
        );
        let s = serde_json::to_string(&f).unwrap();
        let back: ShFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);

        let plain: ShFunction =
            serde_json::from_str(r#"{"kind":"reciprocal_power","i":2}"#).unwrap();
        assert_eq!(plain, ShFunction::ReciprocalPower { i: 2 });
    }

    #[test]
    fn scaled_wrappers_collapse() {
        let f = ShFunction::reciprocal_power(1).unwrap();
        let g = ShFunction::scaled(2.0, ShFunction::scaled(3.0, f.clone()));
        assert_eq!(
            g,
            ShFunction::Scaled {
                c: 6.0,
                f: Box::new(f.clone())
            }
        );
        assert_eq!(ShFunction::scaled(1.0, f.clone()), f);
        assert_eq!(ShFunction::inverse(ShFunction::inverse(f.clone())), f);
    }

    #[test]
    fn inverse_wrapper_evaluates_and_differentiates() {
        // inverse(arcsinh_reciprocal) = 1/sinh, with matching derivative.
        let inv = ShFunction::inverse(ShFunction::ArcsinhReciprocal);
        for x in [0.4, 1.0, 2.3] {
            assert!((inv.eval(x) - 1.0 / x.sinh()).abs() < 1e-12);
            let h = 1e-6 * x;
            let fd = (inv.eval(x + h) - inv.eval(x - h)) / (2.0 * h);
            assert!((inv.deriv(x) - fd).abs() <= 1e-6 * fd.abs());
        }
    }
}
