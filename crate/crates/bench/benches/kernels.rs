//! Benchmarks for the hot kernels: exterior calculus on Lie algebras,
//! exact linear solving, Wang Betti numbers, matrix-order decisions, and
//! momentum evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cosym_core::cosymplectic::{deform_type_i, CosymplecticPair};
use cosym_core::linalg::{solve_linear, Matrix};
use cosym_core::scalar::{rat, rat_int, SymbolicReal};
use cosym_core::topology::{finite_order, wang_betti, IntMatrix, MappingTorus};
use cosym_core::toric::{cpn_moment, moment_condition_residual, ProjectivePoint};
use cosym_core::{Form, LieAlgebra, Vector};

fn h3_r2_pair() -> CosymplecticPair {
    let g = LieAlgebra::new(5, vec![(0, 1, vec![(2, rat_int(1))])]).unwrap();
    let eta = Form::basis(5, &[4]).unwrap();
    let omega = Form::from_terms(
        5,
        2,
        [
            (vec![0, 2], SymbolicReal::from_rational(rat_int(1))),
            (vec![1, 3], SymbolicReal::from_rational(rat_int(1))),
        ],
    )
    .unwrap();
    CosymplecticPair::new(g, eta, omega).unwrap()
}

fn bench_exterior(c: &mut Criterion) {
    let pair = h3_r2_pair();
    let omega = pair.omega().clone();
    let g = pair.algebra().clone();
    c.bench_function("wedge omega^2 (dim 5)", |b| {
        b.iter(|| black_box(&omega).wedge_pow(2).unwrap())
    });
    c.bench_function("chevalley-eilenberg d on omega", |b| {
        b.iter(|| g.d(black_box(&omega)).unwrap())
    });
    c.bench_function("jacobi check (dim 5)", |b| {
        b.iter(|| black_box(&g).jacobi_check())
    });
}

fn bench_cosymplectic(c: &mut Criterion) {
    let pair = h3_r2_pair();
    let theta = Vector::basis(5, 1);
    c.bench_function("type I deformation + verification", |b| {
        b.iter(|| deform_type_i(black_box(&pair), black_box(&theta)).unwrap())
    });
}

fn bench_linalg(c: &mut Criterion) {
    let n = 8;
    let data: Vec<_> = (0..n * n)
        .map(|k| rat((k as i64 * 7 + 3) % 11 - 5, 1 + (k as i64 % 4)))
        .collect();
    let m = Matrix::new(n, n, data).unwrap();
    let b: Vec<_> = (0..n).map(|k| rat(k as i64 - 3, 2)).collect();
    c.bench_function("solve_linear 8x8 rational", |bch| {
        bch.iter(|| solve_linear(black_box(&m), black_box(&b)).unwrap())
    });
}

fn bench_topology(c: &mut Criterion) {
    let torus = MappingTorus::identity_gluing(vec![1, 0, 2, 0, 1], "bench").unwrap();
    c.bench_function("wang_betti (fiber dim 4)", |b| {
        b.iter(|| wang_betti(black_box(&torus)))
    });
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    c.bench_function("finite_order hyperbolic 2x2", |b| {
        b.iter(|| finite_order(black_box(&a)).unwrap())
    });
}

fn bench_toric(c: &mut Criterion) {
    let point = ProjectivePoint::from_integers(&[(3, 1), (1, -2), (0, 2)]).unwrap();
    c.bench_function("cpn_moment n=2", |b| {
        b.iter(|| cpn_moment(black_box(&point)).unwrap())
    });
    c.bench_function("momentum residual n=2, 10 samples", |b| {
        b.iter(|| moment_condition_residual(2, &[1, -1], 10, 42).unwrap())
    });
}

criterion_group!(
    benches,
    bench_exterior,
    bench_cosymplectic,
    bench_linalg,
    bench_topology,
    bench_toric
);
criterion_main!(benches);
