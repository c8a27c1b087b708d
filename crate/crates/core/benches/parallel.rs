//! Sequential versus parallel execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use k3verify_core::eliminate::PitConfig;
use k3verify_core::exactalg::bareiss_determinant;
use k3verify_core::families::{self, IrreducibilityConfig};
use k3verify_core::par::Execution;
use k3verify_core::verify::generic_fiber_sample;
use k3verify_core::wpoly::WeightedPolynomial;
use num_bigint::BigInt;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn poly_mul(c: &mut Criterion) {
    let d90 = families::printed_d90();
    let mut g = c.benchmark_group("poly_mul_d90_squared");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| black_box(d90.try_mul_with(&d90, exec).unwrap())));
    }
    g.finish();
}

fn pit(c: &mut Criterion) {
    let cfg = PitConfig { trials: 100, ..PitConfig::default() };
    let mut g = c.benchmark_group("pit_disc_factor_100_trials");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| black_box(families::disc_factor_pit(&cfg, exec).unwrap())));
    }
    g.finish();
}

fn specialization_sweep(c: &mut Criterion) {
    // r * d90 is primitive in t18 but reducible, so the sweep runs to the end.
    let p: WeightedPolynomial = families::printed_r().try_mul(&families::printed_d90()).unwrap();
    let cfg = IrreducibilityConfig { specializations: 16, ..IrreducibilityConfig::default() };
    let mut g = c.benchmark_group("specialization_sweep_16x16");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| black_box(families::irreducibility_certificate(&p, "t18", &cfg, exec).unwrap())));
    }
    g.finish();
}

fn fiber_suite(c: &mut Criterion) {
    let points: Vec<_> = (0..32).map(|i| generic_fiber_sample(0, i).0).collect();
    let mut g = c.benchmark_group("fiber_suite_32_points");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                exec.map_slice(&points, |t| {
                    families::build_s(t).unwrap().fiber_configuration_with(Execution::Sequential).unwrap().total_euler
                })
            })
        });
    }
    g.finish();
}

fn bareiss(c: &mut Criterion) {
    let mut g = c.benchmark_group("bareiss_rows");
    for n in [24usize, 48] {
        let m: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(((i * 31 + j * 17 + i * j) % 19) as i64 - 9)).collect()).collect();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| {
                b.iter(|| black_box(bareiss_determinant(m.clone(), BigInt::from(1), exec)))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, poly_mul, pit, specialization_sweep, fiber_suite, bareiss);
criterion_main!(benches);
