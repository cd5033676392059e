//! Self-contained special-functions kernel.
//!
//! Log-gamma, the regularized incomplete gamma function and its inverse,
//! chi-square survival, Student-t quantiles, and the range distribution of
//! independent standard normals. Everything is evaluated by series or
//! continued fractions plus safeguarded root-finding, which stays robust
//! for the small gamma shapes (well below 1) this crate produces.
//!
//! All functions are pure and safe to call from any number of threads.

mod beta;
mod gamma;
mod normal;
mod srange;

pub use beta::reg_inc_beta;
pub use gamma::{gamma_quantile, ln_gamma, reg_gamma_lower, reg_gamma_upper};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use srange::{studentized_range_cdf, studentized_range_quantile, studentized_range_sf};

use crate::error::{Error, Result};
use serde::Serialize;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability {value} outside [0, 1]")))
        }
    }

    /// Clamps small floating-point excursions back into `[0, 1]`; anything
    /// further out is a logic error upstream.
    pub(crate) fn clamped(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Shape/rate parameters of a gamma distribution. The density is
/// `rate^shape / Γ(shape) · x^{shape-1} e^{-rate·x}`, so `rate` really is a
/// rate, not a scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::domain(format!("gamma shape {shape} must be positive")));
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::domain(format!("gamma rate {rate} must be positive")));
        }
        Ok(GammaParams { shape, rate })
    }
}

/// Survival function of the chi-square distribution: `1 − P(df/2, x/2)`.
pub fn chi_square_sf(x: f64, df: f64) -> Result<Probability> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!("chi-square argument {x} must be nonnegative")));
    }
    if !(df.is_finite() && df > 0.0) {
        return Err(Error::domain(format!("chi-square df {df} must be positive")));
    }
    Ok(Probability::clamped(reg_gamma_upper(df / 2.0, x / 2.0)?))
}

/// Quantile of Student's t distribution with `df` degrees of freedom,
/// found by safeguarded root-finding on the CDF.
pub fn t_quantile(p: Probability, df: f64) -> Result<f64> {
    if !(df.is_finite() && df > 0.0) {
        return Err(Error::domain(format!("t df {df} must be positive")));
    }
    let p = p.value();
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("t quantile requires p in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // Solve on the upper half and use symmetry.
    let target = p.max(1.0 - p);
    let mut hi = 1.0;
    let mut tries = 0;
    while t_cdf(hi, df)? < target {
        hi *= 2.0;
        tries += 1;
        if tries > 2000 {
            return Err(Error::convergence("t quantile bracket expansion failed"));
        }
    }
    let mut lo = 0.0;
    let mut t = 0.5 * hi;
    for _ in 0..200 {
        let f = t_cdf(t, df)? - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        // Newton step, falling back to bisection when it leaves the bracket.
        let pdf = t_pdf(t, df);
        let mut next = if pdf > 0.0 { t - f / pdf } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-12 * t.abs().max(1.0) {
            t = next;
            break;
        }
        t = next;
    }
    Ok(if p >= 0.5 { t } else { -t })
}

/// CDF of Student's t via the regularized incomplete beta function.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    let x = df / (df + t * t);
    let tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, x)?;
    Ok(if t >= 0.0 { 1.0 - tail } else { tail })
}

/// Two-sided tail probability `P(|T| ≥ t)`, computed without cancellation
/// so that very small p-values keep full precision.
pub fn t_two_sided_p(t: f64, df: f64) -> Result<Probability> {
    let x = df / (df + t * t);
    Ok(Probability::clamped(reg_inc_beta(df / 2.0, 0.5, x)?))
}

fn t_pdf(t: f64, df: f64) -> f64 {
    let ln = ln_gamma((df + 1.0) / 2.0).unwrap_or(f64::NAN)
        - ln_gamma(df / 2.0).unwrap_or(f64::NAN)
        - 0.5 * (df * std::f64::consts::PI).ln()
        - (df + 1.0) / 2.0 * (t * t / df).ln_1p();
    ln.exp()
}
