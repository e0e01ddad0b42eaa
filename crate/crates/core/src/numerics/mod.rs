//! Special functions and deterministic random-variate generation.
//!
//! Everything here is pure: identical inputs give bitwise-identical outputs,
//! and random draws are a function of (seed, stream id, position) only.

mod beta;
mod gamma;
mod rng;

pub use beta::{beta_cdf, beta_quantile};
pub use gamma::{chi2_sf, ln_gamma};
pub use rng::{sample_beta, RngStream};

use crate::error::NumericsError;

/// Standard normal quantile Φ⁻¹(p) for p in (0, 1).
///
/// Inverts the χ²₁ survival function, which this module already computes to
/// near machine precision: if Z ~ N(0,1) then Z² ~ χ²₁ and
/// P(Z² > x) = 2·(1 − Φ(√x)).
pub fn normal_quantile(p: f64) -> Result<f64, NumericsError> {
    if !(0.0 < p && p < 1.0) {
        return Err(NumericsError::Domain {
            what: "normal_quantile requires p in (0,1)",
            value: p,
        });
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let tail = if p > 0.5 { 2.0 * (1.0 - p) } else { 2.0 * p };
    // chi2_sf(x, 1) is monotone decreasing in x; bisect to machine width.
    let (mut lo, mut hi) = (0.0_f64, 500.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi2_sf(mid, 1)? > tail {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * (1.0 + hi) {
            break;
        }
    }
    let z = (0.5 * (lo + hi)).sqrt();
    Ok(if p > 0.5 { z } else { -z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_quantile_known_values() {
        assert_abs_diff_eq!(normal_quantile(0.975).unwrap(), 1.959963985, epsilon = 1e-7);
        assert_abs_diff_eq!(normal_quantile(0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_quantile(0.025).unwrap(), -1.959963985, epsilon = 1e-7);
        assert_abs_diff_eq!(normal_quantile(0.95).unwrap(), 1.644853627, epsilon = 1e-7);
    }

    #[test]
    fn normal_quantile_rejects_boundary() {
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }
}
