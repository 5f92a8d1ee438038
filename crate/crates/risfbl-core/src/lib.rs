// Guards are written as `!(x > 0.0)` throughout so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Analytical and simulated performance of a reflecting-surface-aided radio
//! link with short-packet (finite-blocklength) coding.
//!
//! The crate provides, and cross-validates against each other:
//!
//! * a self-contained special-function kernel ([`specfun`]);
//! * the link geometry, pathloss and channel sampler ([`channel`]);
//! * closed-form moments of the composite channel power and the Gamma match
//!   of the SNR distribution ([`snrstats`]);
//! * the exact average-rate series, its closed-form lower bound, and an
//!   independent quadrature reference ([`rate`]);
//! * a seeded, worker-count-invariant Monte Carlo engine ([`montecarlo`]).
//!
//! With the default `parallel` feature the sample loop fans out over a rayon
//! pool; disabling it falls back to a sequential loop with bit-identical
//! output.

pub mod channel;
pub mod montecarlo;
pub mod rate;
pub mod rng;
pub mod scenario;
pub mod snrstats;
pub mod specfun;

pub use channel::{
    composite_gain, instantaneous_snr, link_gains, optimal_phases, pathloss_db, quantize_phases,
    sample_realization, ChannelRealization, Geometry, LinkBudget, LinkGains, RisConfig,
};
pub use montecarlo::{
    empirical_quantization_loss, ks_distance, run_simulation, sample_power_moments, EmpiricalCdf,
    PhaseMode, PowerMomentEstimate, SimConfig, SimSummary,
};
pub use rate::{
    avg_rate_exact, avg_rate_lower_bound, avg_rate_quadrature, capacity, dispersion, fbl_rate,
    ExactRate, FblParams, RateBreakdown,
};
pub use scenario::ScenarioConfig;
pub use snrstats::{gamma_cdf, gamma_match, gamma_pdf, moments_x, snr_params, GammaParams, MomentPair};
pub use specfun::{QuadratureSpec, SeriesControl};
