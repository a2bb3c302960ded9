use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermite_riesz::basis::gauss_hermite_grid;
use hermite_riesz::kernels::{heat_apply, prop1_numeric, prop2_numeric, KernelConfig};
use hermite_riesz::normlab::{NormGrid, Operator};
use hermite_riesz_bench::dense;

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_hermite");
    for order in [16, 64, 256] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &n| {
            b.iter(|| gauss_hermite_grid(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut g = c.benchmark_group("synthesize");
    g.sample_size(20);
    for dim in [1, 2, 3] {
        let (panels, order) = NormGrid::sweep_layout(dim);
        let grid = NormGrid::for_degree(dim, 7, panels, order).unwrap();
        let f = dense(dim, 6);
        g.bench_with_input(BenchmarkId::new("degree6", dim), &dim, |b, _| {
            b.iter(|| grid.synthesize(black_box(&f)).unwrap())
        });
    }
    let grid = NormGrid::for_degree(2, 7, 32, 6).unwrap();
    let f = dense(2, 6);
    g.bench_function("rstar_magnitude_d2", |b| b.iter(|| Operator::RStar.magnitude_on(black_box(&f), &grid).unwrap()));
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    let f = dense(2, 5);
    g.bench_function("heat_apply_d2", |b| b.iter(|| heat_apply(0.5, black_box(&f), &[0.3, -0.8]).unwrap()));
    for dim in [1, 3] {
        let cfg = KernelConfig::new(dim);
        let y = vec![1.0; dim];
        g.bench_with_input(BenchmarkId::new("prop1_numeric", dim), &dim, |b, &d| {
            b.iter(|| prop1_numeric(d, black_box(&y), &cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("prop2_numeric", dim), &dim, |b, &d| {
            b.iter(|| prop2_numeric(d, black_box(&y), &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, quadrature, synthesis, kernels);
criterion_main!(benches);
