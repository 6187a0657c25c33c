use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use scount::enumeration::{count_algebraic, enumerate_vectors};
use scount::EnumerationOptions;
use scount_bench::{polynomial_workloads, vector_workloads};

fn vectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_vectors");
    group.sample_size(10);
    for workers in [1, 4] {
        let opts = EnumerationOptions::default().with_workers(workers);
        for w in vector_workloads() {
            group.bench_with_input(BenchmarkId::new(w.name, workers), &w, |b, w| {
                b.iter(|| enumerate_vectors(&w.ps, w.n, black_box(&w.h), &opts).unwrap().count)
            });
        }
    }
    group.finish();
}

fn polynomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_algebraic");
    group.sample_size(10);
    let opts = EnumerationOptions::default();
    for w in polynomial_workloads() {
        group.bench_function(w.name, |b| b.iter(|| count_algebraic(&w.ps, w.n, black_box(&w.h), &opts).unwrap().count));
    }
    group.finish();
}

criterion_group!(benches, vectors, polynomials);
criterion_main!(benches);
