//! Generalized exponential integral E_ν(z) at real (not necessarily
//! integer) order, routed through the upper incomplete gamma function:
//! E_ν(z) = z^{ν-1} Γ(1-ν, z).

use super::gamma::{exp_integral_one, upper_cf_value, upper_incomplete_gamma};
use super::SpecFunError;

/// E_ν(z) = ∫_1^∞ e^{-zt} t^{-ν} dt for z > 0 and finite real ν.
pub fn exp_integral(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(z > 0.0) || !z.is_finite() || !nu.is_finite() {
        return Err(SpecFunError::Domain {
            func: "exp_integral",
            detail: format!("nu={nu}, z={z}"),
        });
    }
    if nu == 0.0 {
        return Ok((-z).exp() / z);
    }
    if nu == 1.0 {
        return exp_integral_one(z);
    }
    if z >= 1.0 {
        // e^z E_ν(z) equals the Γ(1-ν, z) continued fraction directly, so
        // large z never mixes huge and tiny factors.
        return Ok(upper_cf_value(1.0 - nu, z)? * (-z).exp());
    }
    let g = upper_incomplete_gamma(1.0 - nu, z)?;
    Ok(((nu - 1.0) * z.ln()).exp() * g)
}

/// Scaled form e^z E_ν(z), stable for arbitrarily large z.
///
/// The rate lower bound needs the product e^β E_α(β); computing the factors
/// separately overflows once β exceeds ~709, while this fused form stays
/// bounded (it tends to 1/z).
pub fn scaled_exp_integral(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(z > 0.0) || !z.is_finite() || !nu.is_finite() {
        return Err(SpecFunError::Domain {
            func: "scaled_exp_integral",
            detail: format!("nu={nu}, z={z}"),
        });
    }
    if z >= 1.0 {
        return upper_cf_value(1.0 - nu, z);
    }
    // Small z: E_ν itself is well scaled and e^z ≤ e.
    Ok(z.exp() * exp_integral(nu, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_closed_form() {
        let v = exp_integral(0.0, 2.0).unwrap();
        assert!((v - (-2.0f64).exp() / 2.0).abs() < 1e-14);
        assert!((v - 0.067_667_641_6).abs() < 1e-9);
    }

    #[test]
    fn e1_reference_value() {
        // E_1(1) = 0.2193839343955203...
        let v = exp_integral(1.0, 1.0).unwrap();
        assert!((v - 0.219_383_934_395_520_3).abs() < 1e-12);
    }

    #[test]
    fn scaled_matches_unscaled_at_moderate_z() {
        for &(nu, z) in &[(2.5f64, 0.3f64), (1.7, 1.0), (4.0, 7.5), (0.4, 2.0)] {
            let direct = z.exp() * exp_integral(nu, z).unwrap();
            let fused = scaled_exp_integral(nu, z).unwrap();
            assert!(
                (direct - fused).abs() < 1e-10 * direct.abs(),
                "nu={nu} z={z}: {direct} vs {fused}"
            );
        }
    }

    #[test]
    fn scaled_survives_huge_argument() {
        // e^z E_ν(z) = (1/z)(1 - ν/z + O(1/z²)) as z → ∞
        let z = 5000.0;
        let v = scaled_exp_integral(3.0, z).unwrap();
        let asymptotic = (1.0 - 3.0 / z) / z;
        assert!((v - asymptotic).abs() < 1e-5 / z, "{v} vs {asymptotic}");
    }

    #[test]
    fn rejects_nonpositive_z() {
        assert!(exp_integral(1.0, 0.0).is_err());
        assert!(exp_integral(1.0, -1.0).is_err());
    }
}
