//! Benchmarks for the hot kernels: the dense biased transform, the clique
//! search behind the exact permutation maxima, globalness certification over
//! the 3^n pattern space, and the bipartite matching test that drives the
//! coupling estimates.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use globalcube::cube::{BiasedMeasure, CubeFamily};
use globalcube::embed::{hall_membership, BitMatrix};
use globalcube::families::{max_t_intersecting, SearchMode};
use globalcube::fourier::{transform, RealFunctionOnCube};
use globalcube::globalness::certify_globalness;

fn bench_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_transform");
    let m = BiasedMeasure::new(0.25).unwrap();
    for n in [10usize, 14] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = RealFunctionOnCube::random(n, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| transform(black_box(f), &m).unwrap())
        });
    }
    group.finish();
}

fn bench_clique_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_t_intersecting");
    group.sample_size(10);
    for n in [4usize, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| max_t_intersecting(black_box(n), 1, SearchMode::Single).unwrap())
        });
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_globalness");
    let m = BiasedMeasure::new(0.2).unwrap();
    for n in [8usize, 10] {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let seeds: Vec<u32> = (0..4).map(|_| rng.gen_range(0..1u32 << n)).collect();
        let fam = CubeFamily::new(n, seeds).unwrap().up_closure();
        group.bench_with_input(BenchmarkId::from_parameter(n), &fam, |b, fam| {
            b.iter(|| certify_globalness(black_box(fam), &m).unwrap())
        });
    }
    group.finish();
}

fn bench_matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("hall_membership");
    for n in [40usize, 80] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = 10.0 * (n as f64).ln() / n as f64;
        let matrices: Vec<BitMatrix> = (0..32)
            .map(|_| {
                let rows: Vec<u128> = (0..n)
                    .map(|_| {
                        let mut r = 0u128;
                        for j in 0..n {
                            if rng.gen_bool(p.min(1.0)) {
                                r |= 1 << j;
                            }
                        }
                        r
                    })
                    .collect();
                BitMatrix::new(n, rows).unwrap()
            })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &matrices, |b, ms| {
            b.iter(|| {
                let mut hits = 0usize;
                for m in ms {
                    if hall_membership(black_box(m)) {
                        hits += 1;
                    }
                }
                hits
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_transform,
    bench_clique_search,
    bench_certify,
    bench_matching
);
criterion_main!(benches);
