//! Benchmarks for the hot paths: dense amplitude evaluation, the LHV
//! enumeration pipeline, the witness scan, sector evolution, and the
//! Monte Carlo sampler.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use wnogo_core::bellmermin::{sample_mean, Observable, PreparedDirection};
use wnogo_core::contradiction::{forbidden_witnesses, StateFamily};
use wnogo_core::lhv::pipeline;
use wnogo_core::preparation::{evolve, tau_pi_half, PreparationConfig};
use wnogo_core::statevector::{w_state, MeasurementSettings};

fn bench_distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("distribution");
    for n in [6usize, 10] {
        let state = w_state(n).unwrap();
        let settings = MeasurementSettings::one_z(n, 0);
        group.throughput(Throughput::Elements(1 << n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| state.distribution(&settings).unwrap())
        });
    }
    group.finish();
}

fn bench_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("lhv_pipeline");
    for n in [3usize, 5, 7] {
        group.throughput(Throughput::Elements(1 << (2 * n)));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| pipeline(n).unwrap())
        });
    }
    group.finish();
}

fn bench_witness_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("forbidden_witnesses");
    for n in [3usize, 7, 9] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| forbidden_witnesses(StateFamily::W, n).unwrap())
        });
    }
    group.finish();
}

fn bench_evolve(c: &mut Criterion) {
    let config = PreparationConfig::new(12, 1.0, 1.0, 2).unwrap();
    let tau = tau_pi_half(&config);
    c.bench_function("evolve_n12", |b| b.iter(|| evolve(&config, tau).unwrap()));
}

fn bench_sample_mean(c: &mut Criterion) {
    let a = Observable::sigma_x();
    let n = PreparedDirection::z();
    let mut group = c.benchmark_group("sample_mean");
    group.sample_size(20);
    group.throughput(Throughput::Elements(1_000_000));
    group.bench_function("1e6", |b| {
        b.iter(|| sample_mean(&a, &n, 1_000_000, 42).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_distribution,
    bench_pipeline,
    bench_witness_scan,
    bench_evolve,
    bench_sample_mean
);
criterion_main!(benches);
