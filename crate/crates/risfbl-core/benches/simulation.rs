//! Compares the sequential sample loop against the rayon-parallel one, and
//! times the two analytic rate routes.
//!
//! With `--no-default-features` only the sequential engine is compiled and
//! the parallel benches disappear; results are bit-identical either way.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use risfbl_core::specfun::SeriesControl;
use risfbl_core::{
    avg_rate_exact, avg_rate_quadrature, run_simulation, FblParams, GammaParams, PhaseMode,
    QuadratureSpec, ScenarioConfig, SimConfig,
};

fn bench_config(workers: usize) -> SimConfig {
    let scenario = ScenarioConfig {
        n_elements: 128,
        direct_link: false,
        ..Default::default()
    };
    SimConfig {
        scenario,
        samples: 2_000,
        seed: 42,
        workers,
        phase_mode: PhaseMode::Quantized(2),
    }
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_2k_samples_n128");
    group.sample_size(10);

    group.bench_function("sequential", |b| {
        let cfg = bench_config(1);
        b.iter(|| run_simulation(black_box(&cfg)).unwrap());
    });

    #[cfg(feature = "parallel")]
    for workers in [2, 4, 8] {
        group.bench_with_input(BenchmarkId::new("parallel", workers), &workers, |b, &w| {
            let cfg = bench_config(w);
            b.iter(|| run_simulation(black_box(&cfg)).unwrap());
        });
    }
    group.finish();
}

fn rate_routes(c: &mut Criterion) {
    let g = GammaParams::new(8.0, 8e-3).unwrap();
    let p = FblParams::new(100, 80, 1e-9).unwrap();
    let mut group = c.benchmark_group("avg_rate_30db_alpha8");
    group.sample_size(20);
    group.bench_function("series", |b| {
        let ctrl = SeriesControl::default();
        b.iter(|| avg_rate_exact(black_box(&g), &p, &ctrl).unwrap());
    });
    group.bench_function("quadrature", |b| {
        let spec = QuadratureSpec::default();
        b.iter(|| avg_rate_quadrature(black_box(&g), &p, &spec).unwrap());
    });
    group.finish();
}

criterion_group!(benches, monte_carlo, rate_routes);
criterion_main!(benches);
