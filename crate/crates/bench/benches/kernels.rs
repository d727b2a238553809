use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use orbitrep::angular::{clebsch_gordan, decompose_product, six_j, HalfInt};
use orbitrep::little_group::wigner_rotation;
use orbitrep::poincare::verify_orbit_algebra;
use orbitrep::tensors::{product_rep, reduce_rep};
use orbitrep::verify::{run_verify, Suite, VerifyOptions};
use orbitrep_bench::samples;

fn little_group(c: &mut Criterion) {
    let inputs = samples(64, 1);
    c.bench_function("wigner_rotation x64", |b| {
        b.iter(|| inputs.iter().map(|(l, n)| wigner_rotation(black_box(l), black_box(n)).unitarity_residual()).fold(0.0, f64::max))
    });
    let (l, n) = &inputs[0];
    c.bench_function("reduce_rep N=6", |b| b.iter(|| reduce_rep(&product_rep(black_box(l), black_box(n), 6).unwrap()).unwrap().off_block_residual()));
}

fn angular(c: &mut Criterion) {
    let h = HalfInt::from_twice;
    c.bench_function("clebsch_gordan j=7/2", |b| b.iter(|| clebsch_gordan(h(7), h(5), h(6), h(3), h(-1), h(2)).unwrap()));
    c.bench_function("six_j j<=4", |b| b.iter(|| six_j(h(8), h(6), h(4), h(6), h(8), h(6)).unwrap()));
    c.bench_function("decompose_product N=8", |b| b.iter(|| decompose_product(black_box(8)).unwrap().blocks.len()));
}

fn algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("orbit algebra closure", |b| b.iter(|| verify_orbit_algebra().rotation_closes));
    group.bench_function("verify dirac", |b| {
        b.iter(|| run_verify(&VerifyOptions { suite: Suite::Dirac, trials: 50, ..Default::default() }).passed)
    });
    group.finish();
}

criterion_group!(benches, little_group, angular, algebra);
criterion_main!(benches);
