//! Special-function kernel shared by the analytical rate formulas and the
//! statistical validation code: log-gamma, incomplete gamma, generalized
//! exponential integral, Kummer U, the Gaussian Q function pair, and the
//! fractional binomial coefficients of the dispersion expansion.
//!
//! Everything here is a pure function of its arguments and safe for
//! unrestricted concurrent use.

mod expint;
mod gamma;
mod kummer;
mod normal;
mod quad;

pub use expint::{exp_integral, scaled_exp_integral};
pub use gamma::{ln_gamma, regularized_lower_gamma, upper_incomplete_gamma};
pub use kummer::{kummer_u, ln_gamma_u};
pub use normal::{erfc, inv_q, q_function};
pub use quad::{gamma_expectation, integrate, QuadratureSpec, SeriesControl};

pub(crate) use gamma::ln_gamma_unchecked;
pub(crate) use quad::gamma_power_nodes;

/// Errors from the special-function kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: no convergence within {limit} steps")]
    NoConvergence { func: &'static str, limit: usize },
    #[error("{func}: result overflows f64")]
    Overflow { func: &'static str },
}

/// Generalized binomial coefficient (1/2 choose k):
/// `0.5·(0.5-1)·…·(0.5-k+1) / k!`, with (1/2 choose 0) = 1.
pub fn binom_half(k: u32) -> f64 {
    let mut value = 1.0;
    for i in 0..k {
        value *= (0.5 - i as f64) / (i as f64 + 1.0);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_half_small_orders() {
        assert_eq!(binom_half(0), 1.0);
        assert_eq!(binom_half(1), 0.5);
        assert_eq!(binom_half(2), -0.125);
        // 0.5·(-0.5)·(-1.5)/6
        assert_eq!(binom_half(3), 0.0625);
    }

    #[test]
    fn binom_half_signs_alternate_after_first() {
        // + for k in {0, 1}, alternating thereafter; magnitudes decreasing.
        assert!(binom_half(0) > 0.0 && binom_half(1) > 0.0);
        let mut prev_mag = binom_half(1).abs();
        for k in 2..60 {
            let v = binom_half(k);
            let expected_sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            assert!(v * expected_sign > 0.0, "k={k}: {v}");
            assert!(v.abs() < prev_mag, "k={k}: |{v}| !< {prev_mag}");
            prev_mag = v.abs();
        }
    }
}
