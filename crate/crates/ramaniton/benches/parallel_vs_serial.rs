//! Parallel vs sequential grid evaluation on the two hot workloads:
//!
//! * a Raman-shift sweep — one full diagonalization per grid point, the
//!   optimizer's and q-sweep's inner loop;
//! * a time series — one shared diagonalization, then one propagation and
//!   moment extraction per time point, the evolution command's inner loop.
//!
//! Both run through `map_ordered` (rayon under the default `parallel`
//! feature) and its sequential twin `map_ordered_seq`, so one report shows
//! the speedup and verifies the fallback path carries the same work.
//! `RAMANITON_THREADS` caps the parallel side as it does in the CLI.

use criterion::{criterion_group, criterion_main, Criterion};
use ramaniton::parallel::{configure_threads_from_env, map_ordered, map_ordered_seq};
use ramaniton::{
    build_nambu_matrix, diagonalize, moments, occupations, propagator, BogoliubovBasis,
    ModelParams,
};

/// Node time of the silicon resonance — a representative late τ.
const TAU_NODE: f64 = 8885.765;

/// Stokes occupation at one grid point, diagonalizing from scratch.
fn stokes_at(q: f64, tau: f64) -> f64 {
    let p = ModelParams::silicon(q).expect("grid stays in the domain");
    let basis = diagonalize(&build_nambu_matrix(&p)).expect("off-degeneracy grid");
    occupations(&moments(&propagator(&basis, tau))).0
}

/// Stokes occupation at one time point on a shared basis.
fn stokes_on(basis: &BogoliubovBasis, tau: f64) -> f64 {
    occupations(&moments(&propagator(basis, tau))).0
}

fn bench_q_sweep(c: &mut Criterion) {
    let grid: Vec<f64> = (0..512)
        .map(|k| 0.99 + 0.02 * k as f64 / 511.0)
        .collect();
    let mut group = c.benchmark_group("q_sweep_512");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| map_ordered(&grid, |&q| stokes_at(q, TAU_NODE)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| map_ordered_seq(&grid, |&q| stokes_at(q, TAU_NODE)))
    });
    group.finish();
}

fn bench_time_series(c: &mut Criterion) {
    let p = ModelParams::silicon(1.0).expect("valid preset");
    let basis = diagonalize(&build_nambu_matrix(&p)).expect("resonant point");
    let taus: Vec<f64> = (0..4096).map(|k| k as f64 * 5.0).collect();
    let mut group = c.benchmark_group("time_series_4096");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| map_ordered(&taus, |&tau| stokes_on(&basis, tau)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| map_ordered_seq(&taus, |&tau| stokes_on(&basis, tau)))
    });
    group.finish();
}

fn configured() -> Criterion {
    let _ = configure_threads_from_env();
    Criterion::default()
}

criterion_group! {
    name = benches;
    config = configured();
    targets = bench_q_sweep, bench_time_series
}
criterion_main!(benches);
