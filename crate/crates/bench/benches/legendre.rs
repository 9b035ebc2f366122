use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gasp_core::legendre::{legendre_p, legendre_q_normalized, p_sequence, q_normalized_sequence};
use gasp_core::Complex64;
use std::hint::black_box;

fn single_degree(c: &mut Criterion) {
    let mu = Complex64::new(0.3, 0.4);
    let mut group = c.benchmark_group("legendre_single");
    for n in [0i64, 8, 64] {
        group.bench_with_input(BenchmarkId::new("p", n), &n, |b, &n| {
            b.iter(|| legendre_p(black_box(n), mu, black_box(0.7)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("q_normalized", n), &n, |b, &n| {
            b.iter(|| legendre_q_normalized(black_box(n), mu, black_box(0.7)).unwrap())
        });
    }
    group.finish();
}

fn sequences(c: &mut Criterion) {
    let mu = Complex64::new(-1.0, 0.0);
    let mut group = c.benchmark_group("legendre_sequence");
    for n_max in [32usize, 128] {
        group.bench_with_input(BenchmarkId::new("p", n_max), &n_max, |b, &n| {
            b.iter(|| p_sequence(black_box(n), mu, 0.5).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("q_normalized", n_max), &n_max, |b, &n| {
            b.iter(|| q_normalized_sequence(black_box(n), mu, 0.5).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_degree, sequences);
criterion_main!(benches);
