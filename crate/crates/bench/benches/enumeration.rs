use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dpw_core::rational::q;
use dpw_core::{
    build_fiber, canonical_form, enumerate_lines, enumerate_roots, enumerate_strata, stable_model, total_degree,
    BoundaryComplex, CompatibilityMode, StratumType,
};

fn lattice(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice");
    for n in 5..=7 {
        group.bench_with_input(BenchmarkId::new("roots", n), &n, |b, &n| b.iter(|| enumerate_roots(black_box(n))));
        group.bench_with_input(BenchmarkId::new("lines", n), &n, |b, &n| b.iter(|| enumerate_lines(black_box(n))));
    }
    group.finish();
}

fn complex(c: &mut Criterion) {
    let mut group = c.benchmark_group("complex");
    group.sample_size(10);
    for n in [6, 7] {
        group.bench_with_input(BenchmarkId::new("edges", n), &n, |b, &n| {
            b.iter(|| BoundaryComplex::build(n, CompatibilityMode::Geometric).unwrap().count_faces(1))
        });
    }
    group.finish();
}

fn strata(c: &mut Criterion) {
    let mut group = c.benchmark_group("strata");
    for label in ["a4", "ab", "aa2a3b"] {
        let ty: StratumType = label.parse().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(label), &ty, |b, ty| b.iter(|| enumerate_strata(ty)));
    }
    group.finish();
}

fn fibers(c: &mut Criterion) {
    let mut group = c.benchmark_group("fibers");
    for label in ["a", "a2", "ab"] {
        let f = build_fiber(label).unwrap();
        let w = f.chamber.0;
        group.bench_with_input(BenchmarkId::new("canonical_form", label), &f, |b, f| b.iter(|| canonical_form(f)));
        group.bench_with_input(BenchmarkId::new("stable_model", label), &f, |b, f| b.iter(|| stable_model(f, w)));
        group.bench_with_input(BenchmarkId::new("total_degree", label), &f, |b, f| b.iter(|| total_degree(f, q(3, 4))));
    }
    group.finish();
}

criterion_group!(benches, lattice, complex, strata, fibers);
criterion_main!(benches);
