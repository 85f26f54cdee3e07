use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadtrace_bench::{dense_fixture, exp_coefficients, sign_vector, sparse_fixture};
use quadtrace_core::{Evaluator, SymmetricOperator};
use std::hint::black_box;

const DEGREE: usize = 20;

fn compare<O: SymmetricOperator>(c: &mut Criterion, group: &str, op: &O) {
    let coeffs = exp_coefficients(DEGREE);
    let z = sign_vector(op.dim(), 7);
    let mut g = c.benchmark_group(group);
    for e in [Evaluator::OneSidedChebyshev, Evaluator::TwoSidedChebyshev] {
        g.bench_with_input(BenchmarkId::new(e.name(), op.dim()), &z, |b, z| {
            b.iter(|| e.evaluate(op, black_box(z), &coeffs, false).unwrap().value)
        });
    }
    g.finish();
}

fn dense(c: &mut Criterion) {
    for d in [200, 1000] {
        compare(c, "dense", &dense_fixture(d, 1));
    }
}

fn sparse(c: &mut Criterion) {
    compare(c, "sparse", &sparse_fixture(100_000, 8, 2));
}

criterion_group!(benches, dense, sparse);
criterion_main!(benches);
