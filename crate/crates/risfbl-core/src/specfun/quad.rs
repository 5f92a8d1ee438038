//! Adaptive Gauss–Kronrod quadrature on finite intervals, plus the weighted
//! Gamma-expectation integrator the rate formulas and oracles are built on.
//!
//! The driver bisects the interval with the largest local error estimate
//! until the summed error meets the requested tolerance. Semi-infinite
//! integrals are mapped to finite windows by the callers: every integrand
//! here decays exponentially, so the window edges are placed where the
//! log-integrand falls `ln(tail_floor)` below its peak.

#![allow(clippy::excessive_precision)] // constants carried verbatim from their sources

use super::{ln_gamma_unchecked, SpecFunError};

/// Truncation controls for the infinite series in the rate formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Relative contribution below which a term counts as converged.
    pub rel_tol: f64,
    /// Absolute floor: terms below this are converged regardless of the sum.
    pub abs_tol: f64,
    /// Hard cap on the number of terms before giving up.
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self, SpecFunError> {
        if !(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_terms == 0 {
            return Err(SpecFunError::Domain {
                func: "SeriesControl::new",
                detail: format!("rel_tol={rel_tol}, abs_tol={abs_tol}, max_terms={max_terms}"),
            });
        }
        Ok(Self { rel_tol, abs_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        // rel_tol leaves ~50x margin against a 1e-6 budget for the slowest
        // physical case (shape near 1 at 40 dB mean SNR, ~5·10^5 terms).
        Self { rel_tol: 1e-12, abs_tol: 1e-16, max_terms: 2_000_000 }
    }
}

/// Controls for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Target relative accuracy of the integral.
    pub rel_tol: f64,
    /// Maximum number of interval bisections.
    pub max_subdivisions: usize,
    /// Tail-cutoff policy for semi-infinite integrands: the finite window is
    /// extended until the decay bound on the remainder drops this far below
    /// the integrand peak.
    pub tail_floor: f64,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, max_subdivisions: usize, tail_floor: f64) -> Result<Self, SpecFunError> {
        if !(rel_tol > 0.0) || max_subdivisions == 0 || !(tail_floor > 0.0) {
            return Err(SpecFunError::Domain {
                func: "QuadratureSpec::new",
                detail: format!(
                    "rel_tol={rel_tol}, max_subdivisions={max_subdivisions}, tail_floor={tail_floor}"
                ),
            });
        }
        Ok(Self { rel_tol, max_subdivisions, tail_floor })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_subdivisions: 200, tail_floor: 1e-20 }
    }
}

// 21-point Kronrod abscissae on the positive half of [-1, 1]; odd indices
// are the embedded 10-point Gauss nodes (QUADPACK dqk21 constants).
const XGK: [f64; 10] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss–Kronrod 21-point panel: returns (integral, error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut fv1 = [0.0f64; 10];
    let mut fv2 = [0.0f64; 10];
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        resk += WGK[j] * sum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * sum;
        }
    }

    // QUADPACK-style error estimate scaled by the deviation integral.
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5));
    }
    let eps50 = 50.0 * f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / eps50 {
        err = err.max(eps50 * resabs);
    }
    (result, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, SpecFunError> {
    integrate_impl(&f, a, b, spec).map(|(v, _)| v)
}

/// As [`integrate`], additionally returning the refined panel boundaries.
pub(crate) fn integrate_with_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, Vec<(f64, f64)>), SpecFunError> {
    integrate_impl(f, a, b, spec)
}

fn integrate_impl<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, Vec<(f64, f64)>), SpecFunError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(SpecFunError::Domain {
            func: "integrate",
            detail: format!("non-finite bounds [{a}, {b}]"),
        });
    }
    if a == b {
        return Ok((0.0, Vec::new()));
    }

    let (v, e) = gk21(f, a, b);
    let mut segments = vec![Segment { a, b, value: v, error: e }];

    let finish = |segments: Vec<Segment>| {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        (total, segments.into_iter().map(|s| (s.a, s.b)).collect())
    };

    for _ in 0..spec.max_subdivisions {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        let tol = (spec.rel_tol * total.abs()).max(1e-300);
        if err <= tol {
            return Ok(finish(segments));
        }

        // Bisect the segment with the largest error.
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i)
            .unwrap();
        let Segment { a: sa, b: sb, .. } = segments[worst];
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // Interval exhausted to machine precision; accept what we have.
            return Ok(finish(segments));
        }
        let (v1, e1) = gk21(f, sa, mid);
        let (v2, e2) = gk21(f, mid, sb);
        segments[worst] = Segment { a: sa, b: mid, value: v1, error: e1 };
        segments.push(Segment { a: mid, b: sb, value: v2, error: e2 });
    }

    let err: f64 = segments.iter().map(|s| s.error).sum();
    let total: f64 = segments.iter().map(|s| s.value).sum();
    if err <= (spec.rel_tol * 100.0) * total.abs() {
        // Within two digits of the request; do not abort a long run for this.
        return Ok(finish(segments));
    }
    Err(SpecFunError::NoConvergence { func: "integrate", limit: spec.max_subdivisions })
}

/// Finds the window edge where `logf` drops below `target`, bisecting between
/// a point above the target and one at or below it.
fn bisect_edge<G: Fn(f64) -> f64>(logf: G, mut inside: f64, mut outside: f64, target: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if logf(mid) > target {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    outside
}

/// The log-space integration window for the Gamma(alpha, 1) weight.
fn gamma_weight_window(alpha: f64, spec: &QuadratureSpec) -> (f64, f64, f64) {
    let lng = ln_gamma_unchecked(alpha);
    let log_weight = |y: f64| alpha * y - y.exp() - lng;

    // Peak of the log-weight sits at y = ln(alpha). The +6 margin absorbs
    // polynomially-growing h factors (the callers' h stay below e^6 times
    // the peak-relative scale over the retained window).
    let y_peak = alpha.ln();
    let target = log_weight(y_peak) + spec.tail_floor.ln() - 6.0;

    // Conservative outer brackets: drop the -e^y term on the left, use a
    // Chernoff-sized excursion on the right.
    let left_out = ((lng + target) / alpha).min(y_peak - 1.0).max(-690.0);
    let right_out = (alpha + 45.0 * alpha.sqrt() + 60.0).ln();

    let y_lo = if log_weight(left_out) > target {
        left_out
    } else {
        bisect_edge(log_weight, y_peak, left_out, target)
    };
    let y_hi = if log_weight(right_out) > target {
        right_out
    } else {
        bisect_edge(log_weight, y_peak, right_out, target)
    };
    (y_lo, y_hi, lng)
}

/// Expectation of `h` under a Gamma(alpha, 1) distribution:
/// `∫_0^∞ h(v) v^{alpha-1} e^{-v} dv / Γ(alpha)`.
///
/// Integrated in `y = ln v` so the weight stays smooth for every
/// `alpha > 0` (no endpoint singularity for alpha < 1); both window tails
/// decay at least exponentially in `y`.
pub fn gamma_expectation<H: Fn(f64) -> f64>(
    alpha: f64,
    h: H,
    spec: &QuadratureSpec,
) -> Result<f64, SpecFunError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(SpecFunError::Domain {
            func: "gamma_expectation",
            detail: format!("alpha={alpha}"),
        });
    }
    let (y_lo, y_hi, lng) = gamma_weight_window(alpha, spec);
    let log_weight = |y: f64| alpha * y - y.exp() - lng;
    let integrand = |y: f64| {
        let logw = log_weight(y);
        if logw < -745.0 {
            return 0.0;
        }
        h(y.exp()) * logw.exp()
    };
    integrate(integrand, y_lo, y_hi, spec)
}

/// Fixed Gauss–Kronrod node set carrying the Gamma(alpha, 1) weight, for
/// evaluating whole families E[φ(V)^k], k = 1, 2, 3, …, as weighted power
/// sums over shared abscissae.
///
/// The panels are the union of adaptive refinements against the bare weight
/// and against `φ^k` at the supplied probe exponents, so the node density
/// resolves the integrand over the whole exponent range, not just at k = 1.
pub(crate) struct GammaPowerNodes {
    /// Abscissae in v-space.
    pub v: Vec<f64>,
    /// Quadrature weight times the Gamma density factor at each abscissa.
    pub w: Vec<f64>,
}

pub(crate) fn gamma_power_nodes<L: Fn(f64) -> f64>(
    alpha: f64,
    phi_log: &L,
    probe_exponents: &[f64],
    spec: &QuadratureSpec,
) -> Result<GammaPowerNodes, SpecFunError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(SpecFunError::Domain {
            func: "gamma_power_nodes",
            detail: format!("alpha={alpha}"),
        });
    }
    let (y_lo, y_hi, lng) = gamma_weight_window(alpha, spec);
    let log_weight = move |y: f64| alpha * y - y.exp() - lng;

    let mut edges: Vec<f64> = Vec::new();
    let mut push_panels = |panels: Vec<(f64, f64)>| {
        for (a, b) in panels {
            edges.push(a);
            edges.push(b);
        }
    };

    let mut k_values = vec![0.0f64];
    k_values.extend_from_slice(probe_exponents);
    for k in k_values {
        let integrand = |y: f64| {
            let lw = log_weight(y) + k * phi_log(y.exp());
            if lw < -745.0 {
                0.0
            } else {
                lw.exp()
            }
        };
        let (_, panels) = integrate_with_panels(&integrand, y_lo, y_hi, spec)?;
        push_panels(panels);
    }

    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (y_hi - y_lo));

    let mut v = Vec::new();
    let mut w = Vec::new();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut push_node = |y: f64, wgt: f64| {
            let lw = log_weight(y);
            let weight = if lw < -745.0 { 0.0 } else { lw.exp() };
            v.push(y.exp());
            w.push(wgt * half * weight);
        };
        push_node(center, WGK[10]);
        for j in 0..10 {
            let dy = half * XGK[j];
            push_node(center - dy, WGK[j]);
            push_node(center + dy, WGK[j]);
        }
    }
    Ok(GammaPowerNodes { v, w })
}
