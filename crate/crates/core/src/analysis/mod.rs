//! Norm and invertibility analysis through the family of fiber
//! representations.
//!
//! The block-diagonal representation over all units is faithful, so its
//! operator norm and smallest singular value are reference values. The
//! point of the per-unit machinery is that the family of fiber
//! representations already determines both: the norm is the maximum over
//! units (one representative per orbit suffices), and invertibility of an
//! element is equivalent to every fiber image being invertible. The
//! witness constructions turn a norm question into a singularity question
//! and back by shifting positive elements by multiples of the unit.

pub mod verify;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::rep::{full_regular, regular_rep};
use crate::spectral::{hermitian_eigenvalues, min_singular_value, spectral_norm};

/// Which units a per-unit sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitScope {
    /// Every unit.
    All,
    /// The least unit of each orbit. Fiber representations at units in a
    /// common orbit are unitarily equivalent, so this loses nothing for
    /// norms, singular values, or spectra.
    OrbitReps,
}

fn scoped_units(g: &FiniteGroupoid, scope: UnitScope) -> Vec<usize> {
    match scope {
        UnitScope::All => g.units().to_vec(),
        UnitScope::OrbitReps => g.orbits().representatives.clone(),
    }
}

/// Per-unit operator norms of the fiber images of one element.
#[derive(Debug, Clone, Serialize)]
pub struct NormProfile {
    pub scope: UnitScope,
    /// Operator norm of the fiber image at each visited unit.
    pub per_unit: BTreeMap<usize, f64>,
    /// Least unit attaining the maximum.
    pub max_unit: usize,
    /// The maximum itself: the norm of the element.
    pub value: f64,
}

/// Sweep the fiber representations and record their operator norms.
pub fn norm_profile(a: &AlgebraElement, scope: UnitScope) -> Result<NormProfile> {
    let g = a.groupoid();
    let mut per_unit = BTreeMap::new();
    let mut max_unit = usize::MAX;
    let mut value = f64::NEG_INFINITY;
    for x in scoped_units(g, scope) {
        let norm = spectral_norm(&regular_rep(a, x)?.matrix)?;
        per_unit.insert(x, norm);
        if norm > value {
            value = norm;
            max_unit = x;
        }
    }
    Ok(NormProfile { scope, per_unit, max_unit, value })
}

/// Norm of the element in the faithful block-diagonal representation.
/// Reference value for [`norm_profile`].
pub fn oracle_norm(a: &AlgebraElement) -> Result<f64> {
    spectral_norm(&full_regular(a)?.matrix)
}

/// Per-unit smallest singular values and the resulting invertibility
/// verdict.
#[derive(Debug, Clone, Serialize)]
pub struct InvertibilityReport {
    pub scope: UnitScope,
    /// Verdict threshold on the smallest singular value.
    pub tol: f64,
    /// Smallest singular value of the fiber image at each visited unit.
    pub per_unit: BTreeMap<usize, f64>,
    /// Least unit attaining the minimum.
    pub min_unit: usize,
    pub min_value: f64,
    /// Whether every visited fiber image clears the threshold.
    pub invertible: bool,
    /// When not invertible: the unit produced by [`singularity_witness`].
    pub witness: Option<usize>,
}

/// Decide invertibility through the family of fiber representations.
pub fn invertible_family(
    a: &AlgebraElement,
    tol: f64,
    scope: UnitScope,
) -> Result<InvertibilityReport> {
    let g = a.groupoid();
    let mut per_unit = BTreeMap::new();
    let mut min_unit = usize::MAX;
    let mut min_value = f64::INFINITY;
    for x in scoped_units(g, scope) {
        let sigma = min_singular_value(&regular_rep(a, x)?.matrix)?;
        per_unit.insert(x, sigma);
        if sigma < min_value {
            min_value = sigma;
            min_unit = x;
        }
    }
    let invertible = min_value > tol;
    let witness = if invertible { None } else { Some(singularity_witness(a)?) };
    Ok(InvertibilityReport { scope, tol, per_unit, min_unit, min_value, invertible, witness })
}

/// Invertibility in the faithful block-diagonal representation. Reference
/// verdict for [`invertible_family`].
pub fn invertible_oracle(a: &AlgebraElement, tol: f64) -> Result<bool> {
    Ok(min_singular_value(&full_regular(a)?.matrix)? > tol)
}

/// A unit whose fiber image is as close to singular as any other: the
/// least maximizer of the norm of `norm(a* a) . unit - a* a`. When the
/// element is not invertible this shift attains its norm exactly where
/// `a* a` has smallest bottom eigenvalue, so the returned unit exhibits
/// the singularity.
pub fn singularity_witness(a: &AlgebraElement) -> Result<usize> {
    let c = a.adjoint().convolve(a)?;
    let c_norm = norm_profile(&c, UnitScope::All)?.value;
    let shifted = &AlgebraElement::unit(a.groupoid()).scale(c_norm.into()) - &c;
    Ok(norm_profile(&shifted, UnitScope::All)?.max_unit)
}

/// Eigenvalues of the fiber images of a self-adjoint element, per unit,
/// together with the eigenvalues of the block-diagonal representation.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub scope: UnitScope,
    /// Ascending eigenvalues of the fiber image at each visited unit.
    pub per_unit: BTreeMap<usize, Vec<f64>>,
    /// Ascending eigenvalues of the block-diagonal representation over all
    /// units, regardless of scope.
    pub full: Vec<f64>,
}

/// Diagonalize the fiber images of a self-adjoint element. Fails with
/// [`Error::NotHermitian`] when an image is not Hermitian.
pub fn spectrum_report(a: &AlgebraElement, scope: UnitScope) -> Result<SpectrumReport> {
    let g = a.groupoid();
    let mut per_unit = BTreeMap::new();
    for x in scoped_units(g, scope) {
        per_unit.insert(x, hermitian_eigenvalues(&regular_rep(a, x)?.matrix)?);
    }
    let full = hermitian_eigenvalues(&full_regular(a)?.matrix)?;
    Ok(SpectrumReport { scope, per_unit, full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::groupoid::{build_groupoid, GroupoidSpec};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// pair(2) next to Z/3: arrows 0..3 on the pair side (units 0, 3),
    /// arrows 4..6 on the group side (unit 4).
    fn two_orbits() -> Arc<FiniteGroupoid> {
        build_groupoid(&GroupoidSpec::Union(vec![
            GroupoidSpec::Pair(2),
            GroupoidSpec::Group {
                table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            },
        ]))
        .unwrap()
    }

    #[test]
    fn family_norm_matches_the_faithful_representation() {
        let g = two_orbits();
        for sample in 0..6 {
            let a = AlgebraElement::from_fn(&g, |i| {
                c(
                    ((i * (sample + 1)) as f64 * 0.7).sin(),
                    ((i + sample) as f64 * 1.1).cos() - 0.4,
                )
            });
            let profile = norm_profile(&a, UnitScope::All).unwrap();
            let reference = oracle_norm(&a).unwrap();
            assert!(
                (profile.value - reference).abs() <= 1e-10 * reference.max(1.0),
                "family norm {} vs reference {}",
                profile.value,
                reference
            );
        }
    }

    #[test]
    fn orbit_representatives_suffice_for_the_norm() {
        let g = two_orbits();
        let a = AlgebraElement::from_fn(&g, |i| c(0.3 * i as f64 - 1.0, (i as f64).sin()));
        let all = norm_profile(&a, UnitScope::All).unwrap();
        let reps = norm_profile(&a, UnitScope::OrbitReps).unwrap();
        assert_eq!(reps.per_unit.len(), 2);
        assert!((all.value - reps.value).abs() <= 1e-10 * all.value.max(1.0));
    }

    #[test]
    fn unit_indicator_norms_localize_to_the_orbit() {
        let g = two_orbits();
        // Indicator of the pair-side units is the identity on that orbit
        // and zero on the group side.
        let p = &AlgebraElement::delta(&g, 0).unwrap() + &AlgebraElement::delta(&g, 3).unwrap();
        let profile = norm_profile(&p, UnitScope::All).unwrap();
        assert_eq!(profile.per_unit[&0], 1.0);
        assert_eq!(profile.per_unit[&3], 1.0);
        assert_eq!(profile.per_unit[&4], 0.0);
        assert_eq!(profile.max_unit, 0);
    }

    #[test]
    fn invertibility_verdicts_and_witnesses() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let one = AlgebraElement::unit(&g);
        let report = invertible_family(&one, 1e-8, UnitScope::All).unwrap();
        assert!(report.invertible);
        assert!(report.witness.is_none());
        assert!((report.min_value - 1.0).abs() <= 1e-12);

        // A single off-diagonal arrow is a partial isometry with a kernel.
        let shift = AlgebraElement::delta(&g, 1).unwrap();
        let report = invertible_family(&shift, 1e-8, UnitScope::All).unwrap();
        assert!(!report.invertible);
        assert!(report.min_value <= 1e-12);
        let witness = report.witness.unwrap();
        // The witness unit must exhibit the singularity.
        let sigma = min_singular_value(&regular_rep(&shift, witness).unwrap().matrix).unwrap();
        assert!(sigma <= 1e-8);
        assert!(invertible_oracle(&one, 1e-8).unwrap());
        assert!(!invertible_oracle(&shift, 1e-8).unwrap());
    }

    #[test]
    fn witness_points_at_the_orbit_that_vanishes() {
        let g = two_orbits();
        // Supported on the pair component only, so the group fiber image
        // is the zero matrix and the witness must be the group unit.
        let a = &AlgebraElement::delta(&g, 0).unwrap() + &AlgebraElement::delta(&g, 3).unwrap();
        assert_eq!(singularity_witness(&a).unwrap(), 4);
        // The zero element is singular everywhere; ties resolve to the
        // least unit.
        let zero = AlgebraElement::zero(&g);
        assert_eq!(singularity_witness(&zero).unwrap(), 0);
    }

    #[test]
    fn spectra_concatenate_and_respect_orbits() {
        let g = two_orbits();
        let raw = AlgebraElement::from_fn(&g, |i| c((i as f64 * 0.9).sin(), 0.2 * i as f64));
        let a = &raw + &raw.adjoint();
        assert!(a.is_self_adjoint(1e-12));
        let report = spectrum_report(&a, UnitScope::All).unwrap();
        // Eigenvalues at the two pair units agree: same orbit.
        let left = &report.per_unit[&0];
        let right = &report.per_unit[&3];
        for (l, r) in left.iter().zip(right) {
            assert!((l - r).abs() <= 1e-10);
        }
        // The block representation's spectrum is the merged per-unit list.
        let mut merged: Vec<f64> = report.per_unit.values().flatten().copied().collect();
        merged.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(merged.len(), report.full.len());
        for (m, f) in merged.iter().zip(&report.full) {
            assert!((m - f).abs() <= 1e-10);
        }
    }

    #[test]
    fn non_self_adjoint_input_is_rejected() {
        let g = FiniteGroupoid::cyclic_group(3).unwrap();
        let a = AlgebraElement::delta(&g, 1).unwrap();
        assert!(matches!(
            spectrum_report(&a, UnitScope::All).unwrap_err(),
            Error::NotHermitian { .. }
        ));
    }
}
