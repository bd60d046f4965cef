use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ewmt_core::sweep::solve_family_sequential;
use ewmt_core::{EllipticFunction, SolverOptions, WarpingFunction};

fn family(c: &mut Criterion) {
    let w = WarpingFunction::Linear;
    let f = EllipticFunction::sqrt_scaled(0.5).unwrap();
    let opts = SolverOptions::default();
    let rho0: Vec<f64> = (0..16).map(|k| 0.5 + 0.125 * k as f64).collect();

    let mut group = c.benchmark_group("solve_family");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(solve_family_sequential(&w, &f, &rho0, &opts)))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(ewmt_core::sweep::solve_family_parallel(
                &w, &f, &rho0, &opts,
            ))
        })
    });
    group.finish();
}

criterion_group!(benches, family);
criterion_main!(benches);
