//! Benchmarks for the hot kernels: convolution, fiber norms, the full
//! regular representation, and the dense Hermitian eigensolver.

use criterion::{criterion_group, criterion_main, Criterion};

use groupoidal::{
    full_regular, hermitian_eigenvalues, norm_profile, spectral_norm, FiniteGroupoid, UnitScope,
};
use groupoidal_bench::{seeded_element, seeded_self_adjoint};

fn convolution(c: &mut Criterion) {
    let g = FiniteGroupoid::cyclic_group(24).unwrap();
    let a = seeded_element(&g, 1);
    let b = seeded_element(&g, 2);
    c.bench_function("convolve z24", |bench| {
        bench.iter(|| a.convolve(&b).unwrap())
    });
}

fn fiber_norms(c: &mut Criterion) {
    let g = FiniteGroupoid::pair(8).unwrap();
    let a = seeded_element(&g, 3);
    c.bench_function("norm profile pair8", |bench| {
        bench.iter(|| norm_profile(&a, UnitScope::All).unwrap().value)
    });
}

fn full_representation(c: &mut Criterion) {
    let g = FiniteGroupoid::pair(8).unwrap();
    let a = seeded_element(&g, 4);
    c.bench_function("full regular norm pair8", |bench| {
        bench.iter(|| spectral_norm(&full_regular(&a).unwrap().matrix).unwrap())
    });
}

fn eigensolver(c: &mut Criterion) {
    let g = FiniteGroupoid::cyclic_group(32).unwrap();
    let a = seeded_self_adjoint(&g, 5);
    let image = full_regular(&a).unwrap().matrix;
    c.bench_function("hermitian eigenvalues 32x32", |bench| {
        bench.iter(|| hermitian_eigenvalues(&image).unwrap())
    });
}

criterion_group!(
    kernels,
    convolution,
    fiber_norms,
    full_representation,
    eigensolver
);
criterion_main!(kernels);
