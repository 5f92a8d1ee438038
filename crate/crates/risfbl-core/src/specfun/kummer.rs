//! Confluent hypergeometric function of the second kind, evaluated from its
//! integral representation
//! `U(a, b, z) = (1/Γ(a)) ∫_0^∞ (1+u)^{b-a-1} u^{a-1} e^{-zu} du`  (a, z > 0).
//!
//! The rate series consume the fused product Γ(a)·U(a, b, z) through
//! [`ln_gamma_u`]: for large a the separate factors overflow/underflow while
//! the fused integral stays representable in log form.

use super::gamma::ln_gamma_unchecked;
use super::quad::{integrate, QuadratureSpec};
use super::SpecFunError;

/// log of Γ(a)·U(a, b, z), i.e. log of the defining integral.
///
/// Integrated in y = ln u with the integrand normalized by its peak value, so
/// arbitrarily scaled integrands reduce to an O(1) quadrature.
pub fn ln_gamma_u(a: f64, b: f64, z: f64, spec: &QuadratureSpec) -> Result<f64, SpecFunError> {
    if !(a > 0.0) || !(z > 0.0) || !a.is_finite() || !b.is_finite() || !z.is_finite() {
        return Err(SpecFunError::Domain {
            func: "ln_gamma_u",
            detail: format!("a={a}, b={b}, z={z}"),
        });
    }
    let p = b - a - 1.0;
    // log-integrand in y = ln u, including the Jacobian u dy = du:
    //   g(y) = a y + p ln(1 + e^y) - z e^y
    let log_f = |y: f64| {
        let u = y.exp();
        a * y + p * u.ln_1p() - z * u
    };

    // Window: left edge from the e^{ay} decay, right edge by doubling until
    // the decay bound e^{-zu} u^{a+max(p,0)} falls below the tail floor.
    let drop = spec.tail_floor.ln() - 6.0;

    // Rough peak location: u* solves a + p u/(1+u) - z u = 0; bounded by
    // (a + |p|)/z + 1. Scan a coarse grid for the max, then refine edges.
    let u_cap = (a + p.abs()) / z + 1.0;
    let mut y_peak = 0.0;
    let mut g_peak = f64::NEG_INFINITY;
    let y_scan_lo = (1e-8f64).ln().min(u_cap.ln() - 5.0);
    let y_scan_hi = (4.0 * u_cap).ln();
    let scan_n = 200;
    for i in 0..=scan_n {
        let y = y_scan_lo + (y_scan_hi - y_scan_lo) * (i as f64) / (scan_n as f64);
        let g = log_f(y);
        if g > g_peak {
            g_peak = g;
            y_peak = y;
        }
    }
    let target = g_peak + drop;

    let mut y_lo = ((target - g_peak) / a + y_peak).min(y_peak - 1.0);
    for _ in 0..200 {
        if log_f(y_lo) <= target || y_lo < -690.0 {
            break;
        }
        y_lo -= 5.0;
    }
    let mut y_hi = y_peak + 1.0;
    for _ in 0..200 {
        if log_f(y_hi) <= target {
            break;
        }
        y_hi += y_hi.abs().max(1.0);
    }

    let integrand = |y: f64| {
        let g = log_f(y) - g_peak;
        if g < -745.0 {
            0.0
        } else {
            g.exp()
        }
    };
    let scaled = integrate(integrand, y_lo, y_hi, spec)?;
    if !(scaled > 0.0) {
        return Err(SpecFunError::NoConvergence { func: "ln_gamma_u", limit: spec.max_subdivisions });
    }
    Ok(g_peak + scaled.ln())
}

/// U(a, b, z) for a > 0, z > 0.
pub fn kummer_u(a: f64, b: f64, z: f64, spec: &QuadratureSpec) -> Result<f64, SpecFunError> {
    let ln_iu = ln_gamma_u(a, b, z, spec)?;
    let ln_u = ln_iu - ln_gamma_unchecked(a);
    if ln_u > 709.0 {
        return Err(SpecFunError::Overflow { func: "kummer_u" });
    }
    Ok(ln_u.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_to_power() {
        // U(a, a+1, z) = z^{-a}
        let spec = QuadratureSpec::default();
        let v = kummer_u(2.0, 3.0, 4.0, &spec).unwrap();
        assert!((v - 0.0625).abs() < 1e-10, "{v}");
    }

    #[test]
    fn u111_equals_e_times_e1() {
        // U(1, 1, 1) = e·E_1(1)
        let spec = QuadratureSpec::default();
        let v = kummer_u(1.0, 1.0, 1.0, &spec).unwrap();
        assert!((v - 0.596_347_362_323_194).abs() < 1e-9, "{v}");
    }

    #[test]
    fn rejects_bad_domain() {
        let spec = QuadratureSpec::default();
        assert!(kummer_u(0.0, 1.0, 1.0, &spec).is_err());
        assert!(kummer_u(1.0, 1.0, 0.0, &spec).is_err());
        assert!(kummer_u(-2.0, 1.0, 1.0, &spec).is_err());
    }

    #[test]
    fn fused_form_handles_large_a() {
        // Γ(150)·U(150, 151, 1) = Γ(150): both factors overflow alone.
        let spec = QuadratureSpec::default();
        let ln_iu = ln_gamma_u(150.0, 151.0, 1.0, &spec).unwrap();
        let expect = ln_gamma_unchecked(150.0); // ln(z^{-a}) = 0 at z = 1
        assert!((ln_iu - expect).abs() < 1e-8 * expect.abs(), "{ln_iu} vs {expect}");
    }
}
