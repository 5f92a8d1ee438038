//! Link geometry, pathloss budget, channel sampling, and reflective-surface
//! phase control — everything needed to turn one random draw into an
//! instantaneous SNR.
//!
//! The composite channel is `h_direct + Σ_n β e^{jθ_n} conj(h_ris_ac[n]) h_ap_ris[n]`:
//! a scalar Rayleigh direct path plus N independently phase-steered reflected
//! products. Sampling is pure given an explicit [`SampleRng`] stream, so
//! parallel workers stay reproducible by construction.

use num_complex::Complex64;

use crate::rng::SampleRng;

/// Errors from geometry/budget construction and channel operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("pathloss needs a positive distance, got {0}")]
    NonPositiveDistance(f64),
    #[error("geometry is degenerate: {0}")]
    DegenerateGeometry(String),
    #[error("link budget field out of range: {0}")]
    BadBudget(String),
    #[error("surface configuration invalid: {0}")]
    BadRisConfig(String),
}

/// 2D node placement in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub ap: [f64; 2],
    pub ac: [f64; 2],
    pub ris: [f64; 2],
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Geometry {
    pub fn new(ap: [f64; 2], ac: [f64; 2], ris: [f64; 2]) -> Result<Self, ChannelError> {
        let g = Self { ap, ac, ris };
        for (name, d) in [
            ("ap-ac", g.ap_ac()),
            ("ap-ris", g.ap_ris()),
            ("ris-ac", g.ris_ac()),
        ] {
            if !(d > 0.0) || !d.is_finite() {
                return Err(ChannelError::DegenerateGeometry(format!(
                    "{name} distance is {d}"
                )));
            }
        }
        Ok(g)
    }

    pub fn ap_ac(&self) -> f64 {
        dist(self.ap, self.ac)
    }

    pub fn ap_ris(&self) -> f64 {
        dist(self.ap, self.ris)
    }

    pub fn ris_ac(&self) -> f64 {
        dist(self.ris, self.ac)
    }
}

/// Distance-law pathloss in dB: `34.53 + 38·log10(d)` for d in meters.
pub fn pathloss_db(distance_m: f64) -> Result<f64, ChannelError> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(ChannelError::NonPositiveDistance(distance_m));
    }
    Ok(34.53 + 38.0 * distance_m.log10())
}

/// Large-scale power gains of the three hops.
///
/// `varsigma` is the direct-path gain; `varrho` and `vartheta` are the
/// per-element gains of the forward and reflected hops. A zero `varsigma`
/// encodes a blocked direct link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub varsigma: f64,
    pub varrho: f64,
    pub vartheta: f64,
}

impl LinkGains {
    pub fn new(varsigma: f64, varrho: f64, vartheta: f64) -> Result<Self, ChannelError> {
        if !(varsigma >= 0.0 && varrho >= 0.0 && vartheta >= 0.0)
            || !(varsigma.is_finite() && varrho.is_finite() && vartheta.is_finite())
        {
            return Err(ChannelError::BadBudget(format!(
                "gains must be finite and nonnegative: ({varsigma}, {varrho}, {vartheta})"
            )));
        }
        Ok(Self { varsigma, varrho, vartheta })
    }

    /// Same reflected-hop gains with the direct path blocked.
    pub fn without_direct(self) -> Self {
        Self { varsigma: 0.0, ..self }
    }
}

/// Power gains from the geometry via the pathloss law. All surface elements
/// share the gains computed at the array center (far-field placement).
pub fn link_gains(geom: &Geometry) -> Result<LinkGains, ChannelError> {
    let varsigma = 10f64.powf(-pathloss_db(geom.ap_ac())? / 10.0);
    let varrho = 10f64.powf(-pathloss_db(geom.ap_ris())? / 10.0);
    let vartheta = 10f64.powf(-pathloss_db(geom.ris_ac())? / 10.0);
    LinkGains::new(varsigma, varrho, vartheta)
}

/// Transmit-side SNR budget.
///
/// `rho` is p / (N0·W·NF): the noise figure scales the effective noise
/// power alongside density and bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_w: f64,
    pub noise_density_w_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure: f64,
    pub rho: f64,
}

impl LinkBudget {
    pub fn new(
        tx_power_w: f64,
        noise_density_w_hz: f64,
        bandwidth_hz: f64,
        noise_figure: f64,
    ) -> Result<Self, ChannelError> {
        if !(tx_power_w > 0.0 && noise_density_w_hz > 0.0 && bandwidth_hz > 0.0) {
            return Err(ChannelError::BadBudget(
                "power, noise density and bandwidth must be positive".into(),
            ));
        }
        if !(noise_figure >= 1.0) {
            return Err(ChannelError::BadBudget(format!(
                "noise figure must be ≥ 1 in linear units, got {noise_figure}"
            )));
        }
        let rho = tx_power_w / (noise_density_w_hz * bandwidth_hz * noise_figure);
        if !rho.is_finite() {
            return Err(ChannelError::BadBudget(format!("rho = {rho}")));
        }
        Ok(Self { tx_power_w, noise_density_w_hz, bandwidth_hz, noise_figure, rho })
    }
}

/// Reflective-surface configuration: element count, quantizer resolution
/// (`None` = continuous/perfect phases), and the common element amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisConfig {
    pub n_elements: usize,
    pub quant_bits: Option<u8>,
    pub amplitude: f64,
}

impl RisConfig {
    pub fn new(n_elements: usize, quant_bits: Option<u8>, amplitude: f64) -> Result<Self, ChannelError> {
        if n_elements == 0 {
            return Err(ChannelError::BadRisConfig("need at least one element".into()));
        }
        if let Some(b) = quant_bits {
            if b == 0 || b > 30 {
                return Err(ChannelError::BadRisConfig(format!("quantizer bits {b} out of range")));
            }
        }
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(ChannelError::BadRisConfig(format!(
                "amplitude must lie in [0, 1], got {amplitude}"
            )));
        }
        Ok(Self { n_elements, quant_bits, amplitude })
    }
}

/// One draw of the direct channel and the two per-element channel vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_direct: Complex64,
    pub h_ap_ris: Vec<Complex64>,
    pub h_ris_ac: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn n_elements(&self) -> usize {
        self.h_ap_ris.len()
    }
}

/// Draws one channel realization: the direct scalar at variance ς and the
/// two N-vectors at per-element variances ϱ and ϑ. Deterministic for a
/// fixed stream.
pub fn sample_realization(gains: &LinkGains, n: usize, rng: &mut SampleRng) -> ChannelRealization {
    let h_direct = rng.complex_gaussian(gains.varsigma);
    let mut h_ap_ris = Vec::with_capacity(n);
    let mut h_ris_ac = Vec::with_capacity(n);
    for _ in 0..n {
        h_ap_ris.push(rng.complex_gaussian(gains.varrho));
    }
    for _ in 0..n {
        h_ris_ac.push(rng.complex_gaussian(gains.vartheta));
    }
    ChannelRealization { h_direct, h_ap_ris, h_ris_ac }
}

/// Wraps a phase to [-π, π).
pub fn wrap_phase(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = theta - TAU * ((theta + PI) / TAU).floor();
    // Guard the upper seam against rounding.
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Phase configuration that co-phases every reflected term.
///
/// With a live direct path, each reflected product is rotated onto
/// arg(h_direct); with the direct path blocked the target phase is zero.
/// Elements with a zero product magnitude get phase 0.
pub fn optimal_phases(real: &ChannelRealization) -> Vec<f64> {
    let target = if real.h_direct.norm_sqr() > 0.0 {
        real.h_direct.arg()
    } else {
        0.0
    };
    real.h_ris_ac
        .iter()
        .zip(&real.h_ap_ris)
        .map(|(hr, ha)| {
            let prod = hr.conj() * ha;
            if prod.norm_sqr() == 0.0 {
                0.0
            } else {
                wrap_phase(target - prod.arg())
            }
        })
        .collect()
}

/// Snaps one phase to the nearest point of the 2^b-point grid
/// `{-π + kΔ : k = 0..2^b-1}`, Δ = π/2^{b-1}, by wrapped distance.
/// Ties break toward the smaller grid value.
pub fn quantize_phase(theta: f64, bits: u8) -> f64 {
    let levels = 1usize << bits;
    let delta = std::f64::consts::PI / (1u64 << (bits - 1)) as f64;
    let mut best = -std::f64::consts::PI;
    let mut best_dist = f64::INFINITY;
    for k in 0..levels {
        let g = -std::f64::consts::PI + k as f64 * delta;
        let d = wrap_phase(theta - g).abs();
        if d < best_dist {
            best_dist = d;
            best = g;
        }
    }
    best
}

/// [`quantize_phase`] applied elementwise.
pub fn quantize_phases(theta: &[f64], bits: u8) -> Vec<f64> {
    theta.iter().map(|&t| quantize_phase(t, bits)).collect()
}

/// Composite complex gain `h_direct + Σ β e^{jθ_n} conj(h_ris_ac[n]) h_ap_ris[n]`.
pub fn composite_gain(real: &ChannelRealization, theta: &[f64], amplitude: f64) -> Complex64 {
    debug_assert_eq!(theta.len(), real.n_elements());
    let mut sum = Complex64::new(0.0, 0.0);
    for ((hr, ha), &t) in real.h_ris_ac.iter().zip(&real.h_ap_ris).zip(theta) {
        sum += Complex64::from_polar(amplitude, t) * (hr.conj() * ha);
    }
    real.h_direct + sum
}

/// Instantaneous SNR γ = ρ·|gain|².
pub fn instantaneous_snr(budget: &LinkBudget, gain: Complex64) -> f64 {
    budget.rho * gain.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_reference_points() {
        assert!((pathloss_db(1.0).unwrap() - 34.53).abs() < 1e-12);
        assert!((pathloss_db(10.0).unwrap() - 72.53).abs() < 1e-12);
        assert!((pathloss_db(100.0).unwrap() - 110.53).abs() < 1e-12);
        assert!(pathloss_db(0.0).is_err());
        assert!(pathloss_db(-5.0).is_err());
    }

    #[test]
    fn gains_from_default_geometry() {
        let geom = Geometry::new([0.0, 0.0], [100.0, 0.0], [50.0, 10.0]).unwrap();
        let g = link_gains(&geom).unwrap();
        // Direct hop at 100 m: 10^{-11.053}
        assert!((g.varsigma - 10f64.powf(-11.053)).abs() < 1e-18);
        // Both reflected hops at sqrt(2600) m
        let pl = 34.53 + 38.0 * 2600f64.sqrt().log10();
        let expect = 10f64.powf(-pl / 10.0);
        assert!((g.varrho - expect).abs() < 1e-16 * expect.abs().max(1.0));
        assert!((g.vartheta - expect).abs() < 1e-16);
        assert!((expect - 1.144e-10).abs() < 1e-13);
        let blocked = g.without_direct();
        assert_eq!(blocked.varsigma, 0.0);
        assert_eq!(blocked.varrho, g.varrho);
    }

    #[test]
    fn budget_rho_matches_hand_arithmetic() {
        // 200 mW, -174 dBm/Hz, 200 kHz, NF 3 dB
        let n0 = 10f64.powf((-174.0 - 30.0) / 10.0);
        let nf = 10f64.powf(0.3);
        let b = LinkBudget::new(0.2, n0, 2e5, nf).unwrap();
        let expect = 0.2 / (n0 * 2e5 * nf);
        assert_eq!(b.rho, expect);
        assert!((b.rho - 1.2589e14).abs() < 1e10);
    }

    #[test]
    fn blocked_direct_draw_is_zero() {
        let gains = LinkGains::new(0.0, 1.0, 1.0).unwrap();
        let mut rng = SampleRng::for_sample(3, 0);
        let r = sample_realization(&gains, 4, &mut rng);
        assert_eq!(r.h_direct, Complex64::new(0.0, 0.0));
        assert!(r.h_ap_ris.iter().all(|h| h.norm_sqr() > 0.0));
    }

    #[test]
    fn same_seed_same_realization() {
        let gains = LinkGains::new(1.0, 1.0, 1.0).unwrap();
        let mut a = SampleRng::for_sample(7, 11);
        let mut b = SampleRng::for_sample(7, 11);
        assert_eq!(
            sample_realization(&gains, 16, &mut a),
            sample_realization(&gains, 16, &mut b)
        );
    }

    #[test]
    fn aligned_channels_need_no_rotation() {
        let real = ChannelRealization {
            h_direct: Complex64::new(2.0, 0.0),
            h_ap_ris: vec![Complex64::new(1.0, 0.0); 3],
            h_ris_ac: vec![Complex64::new(1.0, 0.0); 3],
        };
        for t in optimal_phases(&real) {
            assert!(t.abs() < 1e-15);
        }
    }

    #[test]
    fn blocked_single_element_cancels_product_phase() {
        let phi = 1.234;
        let real = ChannelRealization {
            h_direct: Complex64::new(0.0, 0.0),
            h_ap_ris: vec![Complex64::from_polar(1.0, phi)],
            h_ris_ac: vec![Complex64::new(1.0, 0.0)],
        };
        let t = optimal_phases(&real);
        assert!((t[0] + phi).abs() < 1e-12);
    }

    #[test]
    fn quantizer_reference_cases() {
        // b = 2 grid {-π, -π/2, 0, π/2}: 0.3 snaps to 0
        let q = quantize_phases(&[0.3], 2);
        assert_eq!(q[0], 0.0);
        // b = 1 grid {-π, 0}: π - 0.01 is 0.01 away from -π after wrapping
        let q = quantize_phases(&[std::f64::consts::PI - 0.01], 1);
        assert_eq!(q[0], -std::f64::consts::PI);
    }

    #[test]
    fn quantizer_tie_breaks_to_smaller_value() {
        // -π/2 sits exactly halfway between the b = 1 grid points {-π, 0}
        // (both distances are exactly π/2 in f64).
        let q = quantize_phases(&[-std::f64::consts::FRAC_PI_2], 1);
        assert_eq!(q[0], -std::f64::consts::PI);
    }

    #[test]
    fn composite_is_linear_in_amplitude() {
        let gains = LinkGains::new(1.0, 1.0, 1.0).unwrap();
        let mut rng = SampleRng::for_sample(13, 5);
        let real = sample_realization(&gains, 8, &mut rng);
        let theta = optimal_phases(&real);
        let g1 = composite_gain(&real, &theta, 1.0) - real.h_direct;
        let g_half = composite_gain(&real, &theta, 0.5) - real.h_direct;
        assert!((g1 * 0.5 - g_half).norm() < 1e-12 * g1.norm());
        // β = 0: surface off
        let off = composite_gain(&real, &theta, 0.0);
        assert_eq!(off, real.h_direct);
    }

    #[test]
    fn unit_single_element_case() {
        let real = ChannelRealization {
            h_direct: Complex64::new(0.0, 0.0),
            h_ap_ris: vec![Complex64::new(1.0, 0.0)],
            h_ris_ac: vec![Complex64::new(1.0, 0.0)],
        };
        let g = composite_gain(&real, &[0.0], 1.0);
        assert!((g - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let budget = LinkBudget::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(instantaneous_snr(&budget, Complex64::new(1.0, 1.0)), 2.0);
        assert_eq!(instantaneous_snr(&budget, Complex64::new(0.0, 0.0)), 0.0);
    }
}
