//! Benchmarks for the hot kernels: exact scalar arithmetic, normal
//! ordering, the constant construction, and the vector braiding.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qmink::coordalg::{CoordGen, NCPoly, RewriteSystem};
use qmink::scalars::Scalar;
use qmink::tensors::{LorentzData, Sign};
use qmink::FunctionalData;

fn bench_scalar_field(c: &mut Criterion) {
    let a = &(&Scalar::q_pow(1) - &Scalar::q_pow(-1)) / &Scalar::big_q();
    let b = &Scalar::q_half_pow(3) + &(&Scalar::i() * &Scalar::q_half_pow(-1));
    c.bench_function("scalar_mul_div", |bencher| {
        bencher.iter(|| {
            let p = black_box(&a) * black_box(&b);
            &p / black_box(&b)
        })
    });
}

fn bench_normal_order(c: &mut Criterion) {
    use CoordGen::*;
    let rs = RewriteSystem::standard();
    let word = vec![X3, Z, Z, Zb, X3, Zb, Z, X3];
    let poly = NCPoly::from_term(word, Scalar::one());
    c.bench_function("normal_order_degree_8", |bencher| {
        bencher.iter(|| rs.normal_order(black_box(&poly)))
    });
}

fn bench_constants(c: &mut Criterion) {
    c.bench_function("lorentz_constants", |bencher| {
        bencher.iter(LorentzData::new)
    });
}

fn bench_braiding(c: &mut Criterion) {
    let ld = LorentzData::new();
    let fd = FunctionalData::new(&ld);
    let mut group = c.benchmark_group("braiding");
    group.sample_size(10);
    group.bench_function("vector_braiding", |bencher| {
        bencher.iter(|| fd.big_r(black_box(Sign::Plus)))
    });
    group.finish();
}

criterion_group!(
    kernels,
    bench_scalar_field,
    bench_normal_order,
    bench_constants,
    bench_braiding
);
criterion_main!(kernels);
