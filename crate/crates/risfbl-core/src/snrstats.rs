//! Closed-form moments of the composite power gain under perfect phase
//! alignment, and the Gamma match of the resulting SNR distribution.
//!
//! Conventions: all Gamma parameters use the RATE form, i.e.
//! `pdf(u) = β^α u^{α-1} e^{-βu} / Γ(α)` with mean α/β and second moment
//! α(α+1)/β². Quantized-phase statistics have no closed form here and come
//! from the Monte Carlo engine instead.

use crate::channel::LinkGains;
use crate::specfun::{self, SpecFunError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("moment pair invalid: {0}")]
    BadMoments(String),
    #[error("variance is not positive (m1={m1}, m2={m2}); no Gamma match exists")]
    DegenerateDistribution { m1: f64, m2: f64 },
    #[error("moment evaluation overflowed f64")]
    Overflow,
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// First two raw moments of the composite power gain X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub m1: f64,
    pub m2: f64,
}

impl MomentPair {
    pub fn new(m1: f64, m2: f64) -> Result<Self, StatsError> {
        if !(m1 > 0.0) || !(m2 >= m1 * m1) || !m1.is_finite() || !m2.is_finite() {
            return Err(StatsError::BadMoments(format!("m1={m1}, m2={m2}")));
        }
        Ok(Self { m1, m2 })
    }

    pub fn variance(&self) -> f64 {
        self.m2 - self.m1 * self.m1
    }
}

/// Gamma shape/rate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GammaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, StatsError> {
        if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(StatsError::BadMoments(format!("alpha={alpha}, beta={beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn mean(&self) -> f64 {
        self.alpha / self.beta
    }

    pub fn variance(&self) -> f64 {
        self.alpha / (self.beta * self.beta)
    }
}

/// Sums f64 terms from smallest to largest magnitude.
fn stable_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.iter().sum()
}

/// Closed-form E[X] and E[X²] of the perfectly phase-aligned composite gain
/// for `n` elements.
///
/// E[X] = ς + Nϱϑ + (π²N(N-1)/16)ϱϑ + (πN/4)√(ςϱϑ); the second moment is
/// the matching five-term expression. Terms are accumulated smallest-first:
/// physical gains sit near 1e-10 while the combinatorial factors reach 1e13,
/// so ordering matters at the 1e-12 level.
pub fn moments_x(gains: &LinkGains, n: usize) -> Result<MomentPair, StatsError> {
    if n == 0 {
        return Err(StatsError::BadMoments("n must be ≥ 1".into()));
    }
    let nf = n as f64;
    let s = gains.varsigma;
    let rt = gains.varrho * gains.vartheta; // per-element round-trip power gain
    let pi = std::f64::consts::PI;
    let pi2 = pi * pi;

    let mut m1_terms = [
        s,
        nf * rt,
        pi2 * nf * (nf - 1.0) / 16.0 * rt,
        pi * nf / 4.0 * (s * rt).sqrt(),
    ];
    let m1 = stable_sum(&mut m1_terms);

    let pi15 = pi.powf(1.5);
    let mut m2_terms = [
        2.0 * s * s,
        s * rt * nf * (6.0 + 3.0 * (nf - 1.0) * pi2 / 8.0),
        3.0 * nf * pi15 / 4.0 * (s.powi(3) * rt).sqrt(),
        rt * rt * nf / 256.0
            * (pi2 * pi2 * (nf - 3.0) * (nf - 2.0) * (nf - 1.0)
                + 48.0 * pi2 * (2.0 * nf - 1.0) * (nf - 1.0)
                + 768.0 * nf
                + 256.0),
        (s * rt.powi(3)).sqrt() * nf * pi15 / 32.0
            * (pi2 * (nf - 2.0) * (nf - 1.0) + 48.0 * nf - 12.0),
    ];
    let m2 = stable_sum(&mut m2_terms);

    if !m1.is_finite() || !m2.is_finite() {
        return Err(StatsError::Overflow);
    }
    MomentPair::new(m1, m2)
}

/// Gamma parameters matching the first two moments:
/// α = m1²/(m2-m1²), β = m1/(m2-m1²).
pub fn gamma_match(m: &MomentPair) -> Result<GammaParams, StatsError> {
    let var = m.variance();
    if !(var > 0.0) {
        return Err(StatsError::DegenerateDistribution { m1: m.m1, m2: m.m2 });
    }
    GammaParams::new(m.m1 * m.m1 / var, m.m1 / var)
}

/// Gamma parameters of γ = ρ·X: same shape, rate divided by ρ.
pub fn snr_params(m: &MomentPair, rho: f64) -> Result<GammaParams, StatsError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(StatsError::BadMoments(format!("rho={rho}")));
    }
    let base = gamma_match(m)?;
    GammaParams::new(base.alpha, base.beta / rho)
}

/// Gamma density at x ≥ 0 (rate convention).
pub fn gamma_pdf(g: &GammaParams, x: f64) -> Result<f64, StatsError> {
    if !(x >= 0.0) {
        return Err(StatsError::BadMoments(format!("x={x} < 0")));
    }
    if x == 0.0 {
        // Finite only for α ≥ 1.
        return Ok(match g.alpha {
            a if a > 1.0 => 0.0,
            1.0 => g.beta,
            _ => f64::INFINITY,
        });
    }
    let ln_pdf = g.alpha * g.beta.ln() + (g.alpha - 1.0) * x.ln()
        - g.beta * x
        - specfun::ln_gamma(g.alpha)?;
    Ok(ln_pdf.exp())
}

/// Gamma CDF at x ≥ 0: the regularized lower incomplete gamma P(α, βx).
pub fn gamma_cdf(g: &GammaParams, x: f64) -> Result<f64, StatsError> {
    if !(x >= 0.0) {
        return Err(StatsError::BadMoments(format!("x={x} < 0")));
    }
    Ok(specfun::regularized_lower_gamma(g.alpha, g.beta * x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_only_link_is_rayleigh_power() {
        // ς = 1, no reflected path: E[X] = 1, E[X²] = 2.
        let gains = LinkGains::new(1.0, 0.0, 0.0).unwrap();
        let m = moments_x(&gains, 64).unwrap();
        assert!((m.m1 - 1.0).abs() < 1e-14);
        assert!((m.m2 - 2.0).abs() < 1e-14);
        // ... which matches an exponential: α = 1, β = 1.
        let g = gamma_match(&m).unwrap();
        assert!((g.alpha - 1.0).abs() < 1e-12);
        assert!((g.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocked_link_reduction() {
        let gains = LinkGains::new(0.0, 2e-10, 3e-11).unwrap();
        let n = 128;
        let m = moments_x(&gains, n).unwrap();
        let rt = 2e-10 * 3e-11;
        let nf = n as f64;
        let expect = nf * rt * (1.0 + std::f64::consts::PI.powi(2) * (nf - 1.0) / 16.0);
        assert!((m.m1 - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn gamma_match_arithmetic() {
        let g = gamma_match(&MomentPair::new(2.0, 6.0).unwrap()).unwrap();
        assert!((g.alpha - 2.0).abs() < 1e-14);
        assert!((g.beta - 1.0).abs() < 1e-14);
        let e = gamma_match(&MomentPair::new(1.0, 2.0).unwrap()).unwrap();
        assert!((e.alpha - 1.0).abs() < 1e-14 && (e.beta - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_match_round_trip() {
        for &(alpha, beta) in &[(0.5, 3.0), (2.0, 1e-4), (40.0, 7.0), (1234.5, 2e-9)] {
            let m1 = alpha / beta;
            let m2 = alpha * (alpha + 1.0) / (beta * beta);
            let g = gamma_match(&MomentPair::new(m1, m2).unwrap()).unwrap();
            assert!((g.alpha - alpha).abs() < 1e-12 * alpha, "{g:?}");
            assert!((g.beta - beta).abs() < 1e-12 * beta, "{g:?}");
        }
    }

    #[test]
    fn degenerate_variance_is_rejected() {
        assert!(matches!(
            gamma_match(&MomentPair { m1: 2.0, m2: 4.0 }),
            Err(StatsError::DegenerateDistribution { .. })
        ));
    }

    #[test]
    fn snr_scaling_law() {
        let m = MomentPair::new(2.0, 6.0).unwrap();
        let base = gamma_match(&m).unwrap();
        let scaled = snr_params(&m, 10.0).unwrap();
        assert_eq!(scaled.alpha, base.alpha);
        assert!((scaled.beta - base.beta / 10.0).abs() < 1e-15);
        assert!((scaled.mean() - 10.0 * base.mean()).abs() < 1e-12);
        let unit = snr_params(&m, 1.0).unwrap();
        assert_eq!(unit, base);
    }

    #[test]
    fn moment_consistency_over_random_configurations() {
        // gamma_match(moments_x(...)) reproduces mean and variance exactly,
        // across 200 random gain/size combinations up to N = 4096.
        let mut rng = crate::rng::SampleRng::for_sample(0x4D4F, 0);
        for _ in 0..200 {
            let log10 = |lo: f64, hi: f64, r: &mut crate::rng::SampleRng| {
                10f64.powf(lo + (hi - lo) * r.next_open01())
            };
            let s = if rng.next_u64().is_multiple_of(4) { 0.0 } else { log10(-13.0, -9.0, &mut rng) };
            let gains =
                LinkGains::new(s, log10(-12.0, -8.0, &mut rng), log10(-12.0, -8.0, &mut rng))
                    .unwrap();
            let n = 1 + (rng.next_u64() % 4096) as usize;
            let m = moments_x(&gains, n).unwrap();
            let g = gamma_match(&m).unwrap();
            assert!((g.mean() - m.m1).abs() <= 1e-12 * m.m1, "n={n}");
            assert!((g.variance() - m.variance()).abs() <= 1e-12 * m.variance(), "n={n}");
        }
    }

    #[test]
    fn first_moment_monotone_in_every_input() {
        let base = LinkGains::new(1e-11, 2e-10, 3e-10).unwrap();
        let m_at = |g: &LinkGains, n: usize| moments_x(g, n).unwrap().m1;
        // in N
        let mut last = 0.0;
        for n in [1usize, 2, 8, 64, 512, 4096] {
            let v = m_at(&base, n);
            assert!(v > last);
            last = v;
        }
        // in each gain
        for scale in [2.0, 10.0] {
            let n = 128;
            assert!(m_at(&LinkGains::new(1e-11 * scale, 2e-10, 3e-10).unwrap(), n) > m_at(&base, n));
            assert!(m_at(&LinkGains::new(1e-11, 2e-10 * scale, 3e-10).unwrap(), n) > m_at(&base, n));
            assert!(m_at(&LinkGains::new(1e-11, 2e-10, 3e-10 * scale).unwrap(), n) > m_at(&base, n));
        }
    }

    #[test]
    fn snr_domain_mean_is_rho_times_m1() {
        let gains = LinkGains::new(5e-12, 2e-10, 3e-10).unwrap();
        let m = moments_x(&gains, 256).unwrap();
        for rho in [1.0, 3.5e13, 1e-2] {
            let g = snr_params(&m, rho).unwrap();
            assert!((g.mean() - rho * m.m1).abs() <= 1e-12 * rho * m.m1);
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        use crate::specfun::{integrate, QuadratureSpec};
        let spec = QuadratureSpec::default();
        for &(alpha, beta) in &[(1.0, 1.0), (0.7, 2.0), (6.5, 0.3)] {
            let g = GammaParams::new(alpha, beta).unwrap();
            let hi = g.mean() + 60.0 * g.variance().sqrt() + 60.0 / beta;
            let mass = integrate(|x| gamma_pdf(&g, x.max(1e-300)).unwrap(), 1e-12, hi, &spec).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "alpha={alpha}, beta={beta}: {mass}");
        }
    }

    #[test]
    fn exponential_cdf_special_case() {
        let g = GammaParams::new(1.0, 1.0).unwrap();
        let v = gamma_cdf(&g, 1.0).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!((v - 0.632_120_558_8).abs() < 1e-9);
        assert_eq!(gamma_cdf(&g, 0.0).unwrap(), 0.0);
        assert!(gamma_cdf(&g, -1.0).is_err());
    }

    #[test]
    fn cdf_concentration_far_above_mean() {
        for &alpha in &[1.0, 5.0, 20.0, 50.0] {
            let g = GammaParams::new(alpha, 2.0).unwrap();
            let x = g.mean() + 10.0 * g.variance().sqrt();
            assert!(gamma_cdf(&g, x).unwrap() > 0.999, "alpha={alpha}");
        }
    }
}
