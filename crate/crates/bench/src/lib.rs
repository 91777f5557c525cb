//! Seeded inputs shared by the benchmark targets.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use groupoidal::{AlgebraElement, Complex64, FiniteGroupoid};

/// Deterministic dense element with coefficients in the unit square.
pub fn seeded_element(g: &Arc<FiniteGroupoid>, seed: u64) -> AlgebraElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..g.arrow_count())
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    AlgebraElement::from_coeffs(g, coeffs).expect("coefficient count matches")
}

/// Deterministic self-adjoint element, for the eigensolver benches.
pub fn seeded_self_adjoint(g: &Arc<FiniteGroupoid>, seed: u64) -> AlgebraElement {
    let a = seeded_element(g, seed);
    a.convolve(&a.adjoint()).expect("same groupoid")
}
