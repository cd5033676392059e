//! Standard normal CDF, density, and quantile.

use super::gamma::{reg_gamma_lower, reg_gamma_upper};
use crate::error::{Error, Result};

/// Standard normal CDF, evaluated through the incomplete gamma function
/// (`Φ(x) = ½ + ½·P(½, x²/2)` for `x ≥ 0`), accurate to ~1e-15.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 40.0 {
        return 1.0;
    }
    if x <= -40.0 {
        return 0.0;
    }
    let half = x * x / 2.0;
    if x >= 0.0 {
        0.5 + 0.5 * reg_gamma_lower(0.5, half).expect("valid args").value()
    } else {
        0.5 * reg_gamma_upper(0.5, half).expect("valid args")
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile: a rational first guess polished by Newton
/// steps against the accurate CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p.is_finite() && 0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("normal quantile requires p in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let mut z = normal_quantile_approx(p);
    for _ in 0..8 {
        let err = normal_cdf(z) - p;
        let step = err / normal_pdf(z);
        z -= step;
        if step.abs() <= 1e-15 * z.abs().max(1.0) {
            break;
        }
    }
    Ok(z)
}

/// Hastings-style rational approximation, |error| < 4.5e-4. Good enough to
/// seed Newton iterations or a Wilson-Hilferty guess.
pub(super) fn normal_quantile_approx(p: f64) -> f64 {
    let tail = p.min(1.0 - p).max(1e-300);
    let t = (-2.0 * tail.ln()).sqrt();
    let num = 2.515517 + t * (0.802853 + t * 0.010328);
    let den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
    let z = t - num / den;
    if p < 0.5 {
        -z
    } else {
        z
    }
}
