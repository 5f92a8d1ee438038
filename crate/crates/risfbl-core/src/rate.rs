//! Instantaneous and average achievable rate in the short-blocklength
//! regime, for an SNR that follows a Gamma law.
//!
//! Three routes to the average rate are provided and cross-checked:
//!
//! * [`avg_rate_exact`] — the series form: the capacity term expands the
//!   logarithm as Σ (1/k)·E[(γ/(1+γ))^k]; the dispersion term expands
//!   √(1 - (1+γ)^{-2}) binomially into Σ (1/2 choose n)(-1)^n E[(1+γ)^{-2n}].
//!   Each expectation equals a fused Γ·U Kummer integral; evaluating the
//!   fused, normalized form keeps every term in [0, 1] where the separate
//!   Γ(k+α) and β^α factors would overflow and underflow.
//! * [`avg_rate_lower_bound`] — closed form from the inverse-SNR moment bound
//!   on the capacity term and the two-term expansion of the dispersion.
//! * [`avg_rate_quadrature`] — direct numerical integration of both
//!   expectations against the Gamma density; the independent reference the
//!   series is validated against.

use crate::snrstats::{GammaParams, StatsError};
use crate::specfun::{
    self, binom_half, gamma_expectation, QuadratureSpec, SeriesControl, SpecFunError,
};

const LN_2: f64 = std::f64::consts::LN_2;
const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Terms at which the dispersion series gives up and defers to quadrature.
/// The binomial series converges slowly when the Gamma mass sits near zero
/// SNR; past this point quadrature is both faster and more accurate.
const DISPERSION_SERIES_CAP: usize = 60;

/// Capacity-series terms between verifications of the shared-node power
/// sums against a per-term adaptive integral.
const VERIFY_INTERVAL: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RateError {
    #[error("{0}")]
    Domain(String),
    #[error("series did not converge within {limit} terms")]
    SeriesNoConvergence { limit: usize },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Short-blocklength code parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblParams {
    /// Channel uses per codeword; the dispersion approximation holds for
    /// r ≥ 100.
    pub blocklength: u64,
    /// Payload size in information bits (carried for reporting; L = r·R).
    pub payload_bits: u32,
    /// Target block error probability.
    pub epsilon: f64,
}

impl FblParams {
    pub fn new(blocklength: u64, payload_bits: u32, epsilon: f64) -> Result<Self, RateError> {
        if blocklength < 100 {
            return Err(RateError::Domain(format!(
                "blocklength {blocklength} below the validity floor of 100"
            )));
        }
        if payload_bits == 0 {
            return Err(RateError::Domain("payload must be at least one bit".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(RateError::Domain(format!("epsilon {epsilon} outside (0, 1)")));
        }
        Ok(Self { blocklength, payload_bits, epsilon })
    }

    /// The dispersion-penalty prefactor Q^{-1}(ε)/√r.
    pub fn penalty_factor(&self) -> Result<f64, RateError> {
        Ok(specfun::inv_q(self.epsilon)? / (self.blocklength as f64).sqrt())
    }
}

/// Average-rate decomposition: capacity term, dispersion term (before the
/// Q^{-1}(ε)/√r factor), and the assembled average rate, all in bits per
/// channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub r1: f64,
    pub r2: f64,
    pub avg_rate: f64,
}

/// Truncation diagnostics for the series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesDiagnostics {
    /// Terms consumed by the capacity series.
    pub r1_terms: usize,
    /// Terms consumed by the dispersion series (0 when quadrature took over).
    pub r2_terms: usize,
    /// The dispersion series hit its cap and the value came from quadrature.
    pub r2_quadrature_fallback: bool,
}

/// Series-evaluated average rate plus its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRate {
    pub breakdown: RateBreakdown,
    pub diagnostics: SeriesDiagnostics,
}

/// Shannon capacity log2(1+γ) in bits per channel use.
pub fn capacity(gamma: f64) -> Result<f64, RateError> {
    if !(gamma >= 0.0) {
        return Err(RateError::Domain(format!("snr {gamma} < 0")));
    }
    Ok(gamma.ln_1p() / LN_2)
}

/// Channel dispersion V(γ) = (log2 e)²(1 - 1/(1+γ)²).
pub fn dispersion(gamma: f64) -> Result<f64, RateError> {
    if !(gamma >= 0.0) {
        return Err(RateError::Domain(format!("snr {gamma} < 0")));
    }
    let inv = 1.0 / (1.0 + gamma);
    Ok(LOG2_E * LOG2_E * (1.0 - inv * inv))
}

/// Instantaneous achievable rate C(γ) - Q^{-1}(ε)·√(V(γ)/r).
///
/// May be negative for small γ at stringent ε; the raw value is returned and
/// any clamping is the caller's policy (the Monte Carlo averager reports
/// both clamped and unclamped means).
pub fn fbl_rate(gamma: f64, p: &FblParams) -> Result<f64, RateError> {
    let c = capacity(gamma)?;
    let v = dispersion(gamma)?;
    Ok(c - p.penalty_factor()? * v.sqrt())
}

/// Same as [`fbl_rate`] with the penalty prefactor precomputed, for tight
/// Monte Carlo loops.
pub(crate) fn fbl_rate_with_factor(gamma: f64, penalty_factor: f64) -> f64 {
    let inv = 1.0 / (1.0 + gamma);
    let sqrt_v = LOG2_E * (1.0 - inv * inv).max(0.0).sqrt();
    gamma.ln_1p() / LN_2 - penalty_factor * sqrt_v
}

/// E[(v/(β+v))^k] under Gamma(α, 1): the k-th capacity-series term, i.e. the
/// fused β^α Γ(k+α) U(k+α, 1+α, β) / Γ(α) integral in normalized form.
fn capacity_term_quad(
    alpha: f64,
    beta: f64,
    k: usize,
    spec: &QuadratureSpec,
) -> Result<f64, SpecFunError> {
    let kf = k as f64;
    gamma_expectation(
        alpha,
        |v| {
            // (v/(β+v))^k via exp/ln: k reaches 1e5+, v spans decades.
            let log_ratio = (v / (beta + v)).ln();
            (kf * log_ratio).exp()
        },
        spec,
    )
}

/// E[(β/(β+v))^{2n}] under Gamma(α, 1): the n-th dispersion-series term
/// magnitude, i.e. the fused β^α U(α, 1-2n+α, β) integral.
fn dispersion_term_quad(
    alpha: f64,
    beta: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64, SpecFunError> {
    let e = 2.0 * n as f64;
    gamma_expectation(
        alpha,
        |v| {
            let log_ratio = (beta / (beta + v)).ln();
            (e * log_ratio).exp()
        },
        spec,
    )
}

/// Capacity series Σ_{k≥1} t_k / k over shared quadrature nodes.
///
/// Terms are weighted power sums t_k = Σ_i w_i φ_i^k with the per-node
/// powers advanced by one multiply per term; nodes whose power underflows
/// are dropped. Every `VERIFY_INTERVAL` terms the power sum is checked
/// against a per-term adaptive integral; on disagreement the panel set is
/// rebuilt at doubled resolution and the sum restarts.
fn capacity_series(
    alpha: f64,
    beta: f64,
    ctrl: &SeriesControl,
    quad: &QuadratureSpec,
) -> Result<(f64, usize), RateError> {
    let phi_log = |v: f64| (v / (beta + v)).ln();
    let mut probes = Vec::new();
    let mut pk = 16.0f64;
    while pk < ctrl.max_terms as f64 {
        probes.push(pk);
        pk *= 16.0;
    }

    let mut spec = *quad;
    'rebuild: for _attempt in 0..3 {
        let nodes = specfun::gamma_power_nodes(alpha, &phi_log, &probes, &spec)?;
        // (weight, φ, φ^k) triples; pruned as powers underflow.
        let mut active: Vec<(f64, f64, f64)> = nodes
            .v
            .iter()
            .zip(&nodes.w)
            .map(|(&v, &w)| {
                let phi = v / (beta + v);
                (w, phi, phi)
            })
            .collect();

        let mut sum = 0.0;
        let mut comp = 0.0; // Kahan compensation
        let mut below = 0usize;
        let mut k = 1usize;
        loop {
            let t_k: f64 = active.iter().map(|&(w, _, p)| w * p).sum();

            if k.is_multiple_of(VERIFY_INTERVAL) && t_k > 1e-280 {
                let direct = capacity_term_quad(alpha, beta, k, &spec)?;
                if (t_k - direct).abs() > 1e-8 * direct.abs() {
                    spec.max_subdivisions *= 2;
                    spec.rel_tol *= 1e-2;
                    continue 'rebuild;
                }
            }

            let term = t_k / k as f64;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;

            if term < ctrl.rel_tol * sum || term < ctrl.abs_tol {
                below += 1;
                if below >= 3 {
                    return Ok((sum, k));
                }
            } else {
                below = 0;
            }
            if k >= ctrl.max_terms {
                return Err(RateError::SeriesNoConvergence { limit: ctrl.max_terms });
            }

            for e in active.iter_mut() {
                e.2 *= e.1;
            }
            if k.is_multiple_of(64) {
                active.retain(|&(_, _, p)| p > 1e-305);
            }
            k += 1;
        }
    }
    Err(RateError::SeriesNoConvergence { limit: ctrl.max_terms })
}

/// Average achievable rate from the two series expansions.
///
/// The capacity term is Σ (1/k)·E[(γ/(1+γ))^k]; the dispersion term is the
/// binomial expansion Σ (1/2 choose n)(-1)^n E[(1+γ)^{-2n}]. Either series
/// truncates once three consecutive terms contribute less than
/// `ctrl.rel_tol` of the running sum (or fall below `ctrl.abs_tol`); the
/// dispersion series additionally caps at 60 terms and defers to quadrature
/// when the Gamma mass sits at low SNR, where the binomial expansion crawls.
pub fn avg_rate_exact(
    g: &GammaParams,
    p: &FblParams,
    ctrl: &SeriesControl,
) -> Result<ExactRate, RateError> {
    let alpha = g.alpha;
    let beta = g.beta;
    let quad = QuadratureSpec::default();

    let (sum, r1_terms) = capacity_series(alpha, beta, ctrl, &quad)?;
    let r1 = sum / LN_2;

    // --- dispersion series: r2 = (1/ln 2) Σ_{n≥0} (1/2 choose n)(-1)^n u_n ---
    let mut r2_sum = 1.0; // n = 0 term: u_0 = 1
    let mut r2_terms = 1usize;
    let mut r2_fallback = false;
    let mut below = 0usize;
    for n in 1..=DISPERSION_SERIES_CAP {
        let u_n = dispersion_term_quad(alpha, beta, n, &quad)?;
        let term = if n % 2 == 0 { binom_half(n as u32) } else { -binom_half(n as u32) } * u_n;
        debug_assert!(term <= 0.0, "dispersion terms past n=0 reduce the sum");
        r2_sum += term;
        r2_terms += 1;
        if term.abs() < ctrl.rel_tol * r2_sum.abs() || term.abs() < ctrl.abs_tol {
            below += 1;
            if below >= 3 {
                break;
            }
        } else {
            below = 0;
        }
        if n == DISPERSION_SERIES_CAP {
            r2_fallback = true;
        }
    }
    if below < 3 {
        r2_fallback = true;
    }
    let r2 = if r2_fallback {
        r2_terms = 0;
        dispersion_expectation_quad(g, &quad)?
    } else {
        r2_sum / LN_2
    };

    let penalty = p.penalty_factor()?;
    let breakdown = RateBreakdown { r1, r2, avg_rate: r1 - penalty * r2 };
    Ok(ExactRate {
        breakdown,
        diagnostics: SeriesDiagnostics { r1_terms, r2_terms, r2_quadrature_fallback: r2_fallback },
    })
}

/// Closed-form lower bound on the average rate:
/// `log2(1 + α²/(β(α+1))) - (Q^{-1}(ε)/√r)·(2 - β + e^β β(α+β-1) E_α(β))/(2 ln 2)`.
///
/// The e^β·E_α(β) product is evaluated in fused form so large rates cannot
/// overflow.
pub fn avg_rate_lower_bound(g: &GammaParams, p: &FblParams) -> Result<RateBreakdown, RateError> {
    let alpha = g.alpha;
    let beta = g.beta;
    let r1 = (alpha * alpha / (beta * (alpha + 1.0))).ln_1p() / LN_2;
    let scaled = specfun::scaled_exp_integral(alpha, beta)?;
    let r2 = (2.0 - beta + beta * (alpha + beta - 1.0) * scaled) / (2.0 * LN_2);
    if !r2.is_finite() {
        return Err(RateError::SpecFun(SpecFunError::Overflow { func: "avg_rate_lower_bound" }));
    }
    let penalty = p.penalty_factor()?;
    Ok(RateBreakdown { r1, r2, avg_rate: r1 - penalty * r2 })
}

fn dispersion_expectation_quad(g: &GammaParams, spec: &QuadratureSpec) -> Result<f64, SpecFunError> {
    let beta = g.beta;
    let e = gamma_expectation(
        g.alpha,
        |v| {
            let x = v / beta; // γ in SNR units
            let inv = 1.0 / (1.0 + x);
            (1.0 - inv * inv).max(0.0).sqrt()
        },
        spec,
    )?;
    Ok(LOG2_E * e)
}

/// Average rate by direct adaptive quadrature of both expectations against
/// the Gamma density. Serves as the independent reference for
/// [`avg_rate_exact`].
pub fn avg_rate_quadrature(
    g: &GammaParams,
    p: &FblParams,
    spec: &QuadratureSpec,
) -> Result<RateBreakdown, RateError> {
    let beta = g.beta;
    let r1 = gamma_expectation(g.alpha, |v| (v / beta).ln_1p(), spec)? / LN_2;
    let r2 = dispersion_expectation_quad(g, spec)?;
    let penalty = p.penalty_factor()?;
    Ok(RateBreakdown { r1, r2, avg_rate: r1 - penalty * r2 })
}
