//! Microbenchmarks for the numerical kernels: structure residuals,
//! connection and curvature assembly, the honest bracket path, and the
//! quadrature-backed twisting profile.
//!
//! Points and profiles are fixed so runs are comparable; dimensions 2–4
//! cover the supported range.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cotlift_core::connection::qps_generic;
use cotlift_core::curvature::{curvature_blocks, curvature_frame_direct, nabla_curvature_max};
use cotlift_core::einstein::einstein_residual;
use cotlift_core::lift::complex_structure_residual;
use cotlift_core::lift::nijenhuis::integrability_residual;
use cotlift_core::{B1Curve, BaseSpace, Curve, Family, SolvedB1};

fn fixture(n: usize) -> (BaseSpace, Family, Vec<f64>, Vec<f64>) {
    let base = BaseSpace::new(n, 1.3).expect("base parameters are in range");
    let fam = Family::balanced(
        Curve::Poly(vec![1.0, 0.2]),
        B1Curve::Explicit(Curve::Poly(vec![0.3, 0.05])),
    );
    let x: Vec<f64> = (0..n).map(|i| 0.3 + 0.1 * i as f64).collect();
    let p: Vec<f64> = (0..n).map(|i| 0.8 - 0.2 * i as f64).collect();
    (base, fam, x, p)
}

fn solved_fixture(n: usize) -> (BaseSpace, Family) {
    let base = BaseSpace::new(n, 1.3).expect("base parameters are in range");
    let lambda = Curve::Poly(vec![1.0, 0.2]);
    let solved = SolvedB1::new(lambda.clone(), n, 1.3, -0.7, 0.25);
    (base, Family::balanced(lambda, B1Curve::Solved(solved)))
}

fn bench_structure(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure_residual");
    for n in [2usize, 3, 4] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| complex_structure_residual(&base, &fam, black_box(&x), black_box(&p)))
        });
    }
    group.finish();
}

fn bench_bracket(c: &mut Criterion) {
    let mut group = c.benchmark_group("nijenhuis_bracket");
    group.sample_size(20);
    for n in [2usize, 3] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| integrability_residual(&base, &fam, black_box(&x), black_box(&p)))
        });
    }
    group.finish();
}

fn bench_connection(c: &mut Criterion) {
    let mut group = c.benchmark_group("connection_generic");
    for n in [2usize, 3, 4] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| qps_generic(&base, &fam, black_box(&x[..]), black_box(&p[..])))
        });
    }
    group.finish();
}

fn bench_curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("curvature_blocks");
    for n in [2usize, 3, 4] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| curvature_blocks(&base, &fam, black_box(&x[..]), black_box(&p[..])))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("curvature_direct");
    group.sample_size(20);
    for n in [2usize, 3] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| curvature_frame_direct(&base, &fam, black_box(&x), black_box(&p)))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("curvature_gradient");
    group.sample_size(10);
    for n in [2usize, 3] {
        let (base, fam, x, p) = fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| nabla_curvature_max(&base, &fam, black_box(&x), black_box(&p)))
        });
    }
    group.finish();
}

fn bench_solved_profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("solved_profile");
    group.sample_size(20);
    let (base2, fam2) = solved_fixture(2);
    group.bench_function("eval", |b| {
        b.iter(|| fam2.b1.eval(black_box(1.7_f64)))
    });
    group.bench_function("second_derivative", |b| {
        b.iter(|| fam2.b1.d2(black_box(1.7_f64)))
    });
    let x = vec![0.3, 0.4];
    let p = vec![0.8, 0.6];
    group.bench_function("einstein_residual", |b| {
        b.iter(|| einstein_residual(&base2, &fam2, -0.7, black_box(&x), black_box(&p)))
    });
    group.finish();
}

criterion_group!(
    kernels,
    bench_structure,
    bench_bracket,
    bench_connection,
    bench_curvature,
    bench_solved_profile
);
criterion_main!(kernels);
