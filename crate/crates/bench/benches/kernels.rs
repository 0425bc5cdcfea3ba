//! Benchmarks for the four hot kernels: elimination rank, the canonical
//! conjugation recursion, an exhaustive census, and the increment chain.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use std::sync::Arc;
use unitri_core::census::class_count;
use unitri_core::field::FieldSpec;
use unitri_core::gaparray::GapArray;
use unitri_core::jordan::canonical_conjugator;
use unitri_core::matrix::{jordan_matrix, Matrix};
use unitri_core::partitions::Partition;

fn dense_matrix(n: usize, spec: &Arc<FieldSpec>) -> Matrix {
    let q = spec.order();
    let values: Vec<u32> = (0..n * n)
        .map(|t| {
            let (i, j) = (t / n, t % n);
            ((3 * i * j + 7 * i + j + 1) % q as usize) as u32
        })
        .collect();
    Matrix::from_values(n, n, &values, spec).unwrap()
}

fn worked_example(spec: &Arc<FieldSpec>) -> Matrix {
    let lam = Partition::new(vec![3, 2, 2, 1]).unwrap();
    let mut a = jordan_matrix(&lam, spec).extend_one();
    a.set(8, 8, spec.zero());
    for (i, v) in [3u64, 1, 0, 2, 2, 4, 0, 1].into_iter().enumerate() {
        a.set(i, 8, spec.element(v).unwrap());
    }
    a
}

fn bench_rank(c: &mut Criterion) {
    let f5 = FieldSpec::from_order(5).unwrap();
    let m = dense_matrix(24, &f5);
    c.bench_function("rank 24x24 F_5", |b| b.iter(|| black_box(&m).rank()));
}

fn bench_conjugator(c: &mut Criterion) {
    let f7 = FieldSpec::from_order(7).unwrap();
    let a = worked_example(&f7);
    c.bench_function("canonical conjugator 9x9 F_7", |b| {
        b.iter(|| canonical_conjugator(black_box(&a)).unwrap())
    });
}

fn bench_census(c: &mut Criterion) {
    let f2 = FieldSpec::from_order(2).unwrap();
    c.bench_function("census U_4(2)", |b| {
        b.iter(|| class_count(4, black_box(&f2)).unwrap())
    });
}

fn bench_increments(c: &mut Criterion) {
    let base = GapArray::from_rows(
        Partition::new(vec![3, 2, 1]).unwrap(),
        &[vec![1, 1, 2], vec![1, 1, 1], vec![0, 0, 1]],
    )
    .unwrap();
    c.bench_function("increment chain psi", |b| {
        b.iter(|| {
            let (g1, _) = black_box(&base).psi(1).unwrap();
            let (g2, _) = g1.psi(3).unwrap();
            let (g3, _) = g2.psi(3).unwrap();
            g3
        })
    });
}

criterion_group!(
    kernels,
    bench_rank,
    bench_conjugator,
    bench_census,
    bench_increments
);
criterion_main!(kernels);
