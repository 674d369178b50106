use amlj::aml::{scale_coefficients, ScaleMode};
use amlj::builtin::x3_classical;
use amlj::par;
use amlj::streams::{projective_stream, toric_stream, x3_toric_data};
use criterion::{black_box, criterion_group, criterion_main, Criterion};
use std::sync::Arc;

fn x3_generation(c: &mut Criterion) {
    let ring = Arc::new(x3_classical());
    let data = x3_toric_data(&ring);
    let mut g = c.benchmark_group("toric_stream X3 M=200");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| toric_stream(&data, ring.clone(), black_box(200)).unwrap()));
    g.bench_function("sequential", |b| {
        b.iter(|| par::sequential(|| toric_stream(&data, ring.clone(), black_box(200)).unwrap()))
    });
    g.finish();
}

fn p3_scaling(c: &mut Criterion) {
    let s = projective_stream(3, 2000);
    let mut g = c.benchmark_group("scale_coefficients P3 m=1000..2000");
    g.bench_function("parallel", |b| {
        b.iter(|| scale_coefficients(&s, black_box(4.0), 0.0, ScaleMode::Gamma, 1000..=2000).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| par::sequential(|| scale_coefficients(&s, black_box(4.0), 0.0, ScaleMode::Gamma, 1000..=2000).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, x3_generation, p3_scaling);
criterion_main!(benches);
