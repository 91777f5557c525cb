//! Matrix realizations of the convolution algebra.
//!
//! The workhorse is the regular representation at a unit `x`: the algebra
//! acts on the Hilbert space spanned by the source fiber at `x` (basis
//! ordered by ascending arrow id), with matrix entry
//! `(row g2, col g1) = f(g2 . inverse(g1))`. For `g1, g2` in the same
//! source fiber that product is always defined, so the entry formula is
//! total. The direct sum over all units in ascending order is a faithful
//! realization whose norm and spectrum serve as the brute-force reference
//! everywhere else in the crate.

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::spectral::ComplexMatrix;

/// What a basis vector of a represented space stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// Fiber basis vector at an arrow.
    Arrow(usize),
    /// Basis vector of the isotropy group algebra at a group element.
    IsotropyElement(usize),
    /// Elementary tensor `(arrow, component)` of a fiber-times-rep space.
    Tensor { arrow: usize, component: usize },
    /// Member of an orthonormalized quotient basis.
    Orthonormal(usize),
}

/// A finite-dimensional representation snapshot: an ordered basis plus the
/// matrix of one operator in that basis. `matrix[(i, j)]` is the
/// coefficient of `basis[i]` in the image of `basis[j]`.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub basis: Vec<BasisLabel>,
    pub matrix: ComplexMatrix,
}

impl MatrixRep {
    /// Dimension of the represented space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Max-entry distance from unitarity (checks both products).
    pub fn unitary_defect(&self) -> f64 {
        let n = self.matrix.rows();
        let eye = ComplexMatrix::identity(n);
        let left = self.matrix.dagger().mul(&self.matrix).sub(&eye).max_abs();
        let right = self.matrix.mul(&self.matrix.dagger()).sub(&eye).max_abs();
        left.max(right)
    }
}

/// Regular representation of `f` at the unit `x`.
pub fn regular_rep(f: &AlgebraElement, x: usize) -> Result<MatrixRep> {
    let g = f.groupoid();
    let fiber = g.fibers(x)?.source_fiber.clone();
    let k = fiber.len();
    let mut m = ComplexMatrix::zeros(k, k);
    for (col, &g1) in fiber.iter().enumerate() {
        let g1_inv = g.inverse(g1)?;
        for (row, &g2) in fiber.iter().enumerate() {
            // Always composable: source(g2) = x = range(inverse(g1)).
            let prod = g.compose(g2, g1_inv)?;
            m.set(row, col, f.coeff(prod));
        }
    }
    Ok(MatrixRep { basis: fiber.into_iter().map(BasisLabel::Arrow).collect(), matrix: m })
}

/// Direct sum of the regular representations over all units, ascending.
pub fn full_regular(f: &AlgebraElement) -> Result<MatrixRep> {
    let g = f.groupoid();
    let mut blocks = Vec::new();
    let mut basis = Vec::new();
    for &u in g.units() {
        let rep = regular_rep(f, u)?;
        basis.extend(rep.basis);
        blocks.push(rep.matrix);
    }
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    Ok(MatrixRep { basis, matrix: ComplexMatrix::block_diag(&refs) })
}

/// Left regular representation of the isotropy group at `x`, applied to an
/// element supported on that group.
pub fn isotropy_regular(b: &AlgebraElement, x: usize) -> Result<MatrixRep> {
    let g = b.groupoid();
    let iso = g.fibers(x)?.isotropy.clone();
    for gamma in b.support() {
        if iso.binary_search(&gamma).is_err() {
            return Err(Error::SupportOutsideIsotropy { arrow: gamma });
        }
    }
    let k = iso.len();
    let mut m = ComplexMatrix::zeros(k, k);
    for (col, &h1) in iso.iter().enumerate() {
        let h1_inv = g.inverse(h1)?;
        for (row, &h2) in iso.iter().enumerate() {
            let prod = g.compose(h2, h1_inv)?;
            m.set(row, col, b.coeff(prod));
        }
    }
    Ok(MatrixRep {
        basis: iso.into_iter().map(BasisLabel::IsotropyElement).collect(),
        matrix: m,
    })
}

/// Right-translation unitary on the fiber at `x` by an isotropy element
/// `zeta`: sends the basis vector at `g . zeta` to the one at `g`.
pub fn translation_unitary(
    g: &std::sync::Arc<FiniteGroupoid>,
    x: usize,
    zeta: usize,
) -> Result<MatrixRep> {
    let fib = g.fibers(x)?;
    if fib.isotropy.binary_search(&zeta).is_err() {
        return Err(Error::NotInIsotropy { arrow: zeta, unit: x });
    }
    let fiber = fib.source_fiber.clone();
    let k = fiber.len();
    let mut m = ComplexMatrix::zeros(k, k);
    for (row, &gamma) in fiber.iter().enumerate() {
        let translated = g.compose(gamma, zeta)?;
        let col = fiber.binary_search(&translated).expect("fiber closed under translation");
        m.set(row, col, Complex64::new(1.0, 0.0));
    }
    Ok(MatrixRep { basis: fiber.into_iter().map(BasisLabel::Arrow).collect(), matrix: m })
}

/// Permutation unitary conjugating the regular representation at `x` into
/// the one at `y`, built from the least connecting arrow. Returns the
/// intertwiner (rows over the fiber at `y`, columns over the fiber at `x`)
/// together with the connecting arrow id, or `None` when the units lie in
/// different orbits.
pub fn orbit_intertwiner(
    g: &std::sync::Arc<FiniteGroupoid>,
    x: usize,
    y: usize,
) -> Result<Option<(MatrixRep, usize)>> {
    let fiber_x = g.fibers(x)?.source_fiber.clone();
    let fiber_y = g.fibers(y)?.source_fiber.clone();
    let Some(&connecting) = fiber_x.iter().find(|&&a| g.arrows()[a].range == y) else {
        return Ok(None);
    };
    let k = fiber_x.len();
    debug_assert_eq!(k, fiber_y.len());
    let mut m = ComplexMatrix::zeros(k, k);
    for (row, &gamma) in fiber_y.iter().enumerate() {
        // V maps the basis vector at gamma . g0 (in the fiber at x) to the
        // one at gamma (in the fiber at y).
        let translated = g.compose(gamma, connecting)?;
        let col = fiber_x.binary_search(&translated).expect("translation lands in fiber");
        m.set(row, col, Complex64::new(1.0, 0.0));
    }
    Ok(Some((
        MatrixRep { basis: fiber_y.into_iter().map(BasisLabel::Arrow).collect(), matrix: m },
        connecting,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_groupoid, GroupoidSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent route: build the matrix column by column from the
    /// defining action sum, scanning all factorizations in the table.
    fn action_sum_matrix(f: &AlgebraElement, x: usize) -> ComplexMatrix {
        let g = f.groupoid();
        let fiber = &g.fibers(x).unwrap().source_fiber;
        let k = fiber.len();
        let mut m = ComplexMatrix::zeros(k, k);
        for (col, &g1) in fiber.iter().enumerate() {
            for (row, &gamma) in fiber.iter().enumerate() {
                let mut total = c(0.0, 0.0);
                for gp in 0..g.arrow_count() {
                    if g.compose_opt(gp, g1) == Some(gamma) {
                        total += f.coeff(gp);
                    }
                }
                m.set(row, col, total);
            }
        }
        m
    }

    #[test]
    fn unit_maps_to_identity() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let one = AlgebraElement::unit(&g);
        for &u in g.units() {
            let rep = regular_rep(&one, u).unwrap();
            assert_eq!(rep.matrix, ComplexMatrix::identity(2));
        }
        let full = full_regular(&one).unwrap();
        assert_eq!(full.matrix, ComplexMatrix::identity(4));
    }

    #[test]
    fn pair2_delta_has_single_entry() {
        // f = delta at arrow (0 <- 1), fiber at unit 3 (the point 1).
        let g = FiniteGroupoid::pair(2).unwrap();
        let f = AlgebraElement::delta(&g, 1).unwrap();
        let rep = regular_rep(&f, 3).unwrap();
        assert_eq!(rep.basis, vec![BasisLabel::Arrow(1), BasisLabel::Arrow(3)]);
        for row in 0..2 {
            for col in 0..2 {
                let expected = if (row, col) == (0, 1) { 1.0 } else { 0.0 };
                assert_eq!(rep.matrix.get(row, col), c(expected, 0.0));
            }
        }
    }

    #[test]
    fn group_delta_translates() {
        let g = FiniteGroupoid::cyclic_group(2).unwrap();
        let f = AlgebraElement::delta(&g, 1).unwrap();
        let rep = regular_rep(&f, 0).unwrap();
        assert_eq!(rep.matrix.get(0, 0), c(0.0, 0.0));
        assert_eq!(rep.matrix.get(0, 1), c(1.0, 0.0));
        assert_eq!(rep.matrix.get(1, 0), c(1.0, 0.0));
        assert_eq!(rep.matrix.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn entry_formula_matches_action_sum() {
        let spec = GroupoidSpec::Union(vec![
            GroupoidSpec::Pair(3),
            GroupoidSpec::Group { table: vec![vec![0, 1], vec![1, 0]] },
        ]);
        let g = build_groupoid(&spec).unwrap();
        let f = AlgebraElement::from_fn(&g, |i| {
            c((i as f64 * 1.3).sin(), (i as f64 - 4.0) * 0.21)
        });
        for &u in g.units() {
            let direct = regular_rep(&f, u).unwrap().matrix;
            let oracle = action_sum_matrix(&f, u);
            assert!(direct.sub(&oracle).max_abs() <= 1e-15);
        }
    }

    #[test]
    fn full_regular_is_block_diagonal() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let f = AlgebraElement::from_fn(&g, |i| c(i as f64 + 1.0, 0.0));
        let full = full_regular(&f).unwrap();
        assert_eq!(full.dim(), 4);
        // Unit order [0, 3]; fibers [0, 2] and [1, 3].
        assert_eq!(
            full.basis,
            vec![
                BasisLabel::Arrow(0),
                BasisLabel::Arrow(2),
                BasisLabel::Arrow(1),
                BasisLabel::Arrow(3)
            ]
        );
        for i in 0..2 {
            for j in 2..4 {
                assert_eq!(full.matrix.get(i, j), c(0.0, 0.0));
                assert_eq!(full.matrix.get(j, i), c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn isotropy_regular_examples() {
        let g = FiniteGroupoid::cyclic_group(2).unwrap();
        let b = &AlgebraElement::delta(&g, 0).unwrap()
            + &AlgebraElement::delta(&g, 1).unwrap().scale(c(2.0, 0.0));
        let rep = isotropy_regular(&b, 0).unwrap();
        assert_eq!(rep.matrix.get(0, 0), c(1.0, 0.0));
        assert_eq!(rep.matrix.get(0, 1), c(2.0, 0.0));
        assert_eq!(rep.matrix.get(1, 0), c(2.0, 0.0));
        assert_eq!(rep.matrix.get(1, 1), c(1.0, 0.0));

        let p = FiniteGroupoid::pair(2).unwrap();
        let off = AlgebraElement::delta(&p, 1).unwrap();
        assert!(matches!(
            isotropy_regular(&off, 0).unwrap_err(),
            Error::SupportOutsideIsotropy { arrow: 1 }
        ));
    }

    #[test]
    fn translation_unitaries_form_a_representation() {
        let g = FiniteGroupoid::cyclic_group(3).unwrap();
        let r1 = translation_unitary(&g, 0, 1).unwrap();
        let r2 = translation_unitary(&g, 0, 2).unwrap();
        assert!(r1.unitary_defect() == 0.0);
        let prod = r1.matrix.mul(&r2.matrix);
        let r_prod = translation_unitary(&g, 0, g.compose(1, 2).unwrap()).unwrap();
        assert_eq!(prod, r_prod.matrix);
        let cube = r1.matrix.mul(&r1.matrix).mul(&r1.matrix);
        assert_eq!(cube, ComplexMatrix::identity(3));

        let p = FiniteGroupoid::pair(2).unwrap();
        assert!(matches!(
            translation_unitary(&p, 0, 1).unwrap_err(),
            Error::NotInIsotropy { arrow: 1, unit: 0 }
        ));
    }

    #[test]
    fn orbit_intertwiner_conjugates_fiber_reps() {
        let g = FiniteGroupoid::pair(3).unwrap();
        let f = AlgebraElement::from_fn(&g, |i| c((i as f64).cos(), 0.4 * i as f64 - 1.0));
        let (v, connecting) = orbit_intertwiner(&g, 0, 4).unwrap().unwrap();
        assert_eq!(g.arrows()[connecting].source, 0);
        assert_eq!(g.arrows()[connecting].range, 4);
        assert!(v.unitary_defect() == 0.0);
        let lhs = v.matrix.mul(&regular_rep(&f, 0).unwrap().matrix).mul(&v.matrix.dagger());
        let rhs = regular_rep(&f, 4).unwrap().matrix;
        assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn different_orbits_have_no_intertwiner() {
        let spec = GroupoidSpec::Union(vec![GroupoidSpec::Pair(1), GroupoidSpec::Pair(1)]);
        let g = build_groupoid(&spec).unwrap();
        assert!(orbit_intertwiner(&g, 0, 1).unwrap().is_none());
    }
}
