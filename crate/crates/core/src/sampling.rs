//! Generators for algebra elements, module vectors, and isotropy
//! representations, used by the self-check suite and the test batteries.
//!
//! Random generators take the caller's generator so sweeps are
//! reproducible from a seed; the structured battery is fully
//! deterministic.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::induction::{IsotropyRep, ModuleVector};

fn uniform(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Element with coefficients drawn uniformly from the complex unit square.
pub fn random_element(g: &Arc<FiniteGroupoid>, rng: &mut impl Rng) -> AlgebraElement {
    let coeffs = (0..g.arrow_count()).map(|_| uniform(rng)).collect();
    AlgebraElement::from_coeffs(g, coeffs).expect("coefficient count matches")
}

/// Self-adjoint element: the real part of a random element.
pub fn random_self_adjoint(g: &Arc<FiniteGroupoid>, rng: &mut impl Rng) -> AlgebraElement {
    let a = random_element(g, rng);
    (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// Positive element `a* a` for a random `a`.
pub fn random_positive(g: &Arc<FiniteGroupoid>, rng: &mut impl Rng) -> AlgebraElement {
    let a = random_element(g, rng);
    a.adjoint().convolve(&a).expect("same groupoid")
}

/// Module vector at `x` with uniform coefficients.
pub fn random_module_vector(
    g: &Arc<FiniteGroupoid>,
    x: usize,
    rng: &mut impl Rng,
) -> Result<ModuleVector> {
    let len = g.fibers(x)?.source_fiber.len();
    let coeffs = (0..len).map(|_| uniform(rng)).collect();
    ModuleVector::from_coeffs(g, x, coeffs)
}

/// A deterministic battery of structurally interesting elements: the zero
/// and unit elements, single arrows, shifted units, sign patterns, orbit
/// indicators, and skew combinations. At most 50 elements, in a fixed
/// order.
pub fn structured_elements(g: &Arc<FiniteGroupoid>) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    out.push(AlgebraElement::zero(g));
    out.push(AlgebraElement::unit(g));
    let m = g.arrow_count();
    for gamma in 0..m.min(24) {
        out.push(AlgebraElement::delta(g, gamma).expect("arrow id in range"));
    }
    let non_units: Vec<usize> = (0..m).filter(|&gamma| !g.is_unit(gamma)).collect();
    for &gamma in non_units.iter().take(6) {
        let two_unit = AlgebraElement::unit(g).scale(Complex64::new(2.0, 0.0));
        out.push(&two_unit + &AlgebraElement::delta(g, gamma).expect("in range"));
    }
    out.push(AlgebraElement::from_fn(g, |_| Complex64::new(1.0, 0.0)));
    out.push(AlgebraElement::from_fn(g, |i| {
        Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    }));
    out.push(AlgebraElement::from_fn(g, |i| {
        Complex64::new(0.1 * i as f64, 1.0 - 0.05 * i as f64)
    }));
    for class in g.orbits().classes.iter().take(4) {
        let mut indicator = AlgebraElement::zero(g);
        for &u in class {
            indicator = &indicator + &AlgebraElement::delta(g, u).expect("unit id in range");
        }
        out.push(indicator);
    }
    for &gamma in non_units.iter().take(4) {
        let d = AlgebraElement::delta(g, gamma).expect("in range");
        let dinv = d.adjoint();
        out.push(&d - &dinv);
        out.push(&d + &dinv.scale(Complex64::new(0.0, 1.0)));
    }
    out.truncate(50);
    out
}

/// Representations of the isotropy group at `x` that the constructors can
/// build: the trivial and left regular representations, characters when
/// the group is cyclic and nontrivial, and a direct sum. Deterministic
/// order.
pub fn isotropy_rep_menu(g: &Arc<FiniteGroupoid>, x: usize) -> Result<Vec<IsotropyRep>> {
    let mut menu = Vec::new();
    let trivial = IsotropyRep::trivial(g, x)?;
    let regular = IsotropyRep::left_regular(g, x)?;
    let order = regular.dim();
    menu.push(trivial.clone());
    menu.push(regular.clone());
    if order > 1 {
        for k in 1..=order.saturating_sub(1).min(2) {
            if let Ok(chi) = IsotropyRep::character(g, x, k) {
                menu.push(chi);
            }
        }
        menu.push(trivial.direct_sum(&regular)?);
    }
    Ok(menu)
}
