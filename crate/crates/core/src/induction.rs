//! Hilbert-module structure over isotropy group algebras and induced
//! representations.
//!
//! Functions on the source fiber at a unit `x` form a right module over the
//! group algebra of the isotropy group at `x`, with the algebra-valued
//! pairing `<phi, psi>(zeta) = sum over g1 g2 = zeta of
//! conj(phi(inverse(g1))) psi(g2)`. Pairing a unitary representation `L` of
//! the isotropy group against that structure induces a representation of
//! the whole convolution algebra: the elementary tensors `e_g (x) xi` carry
//! the sesquilinear form `<phi (x) xi, psi (x) eta> = <L(<psi, phi>) xi,
//! eta>`, and operators act by convolution on the left leg.
//!
//! At finite scale the completion is a quotient: the Gram matrix of the
//! tensor basis is diagonalized, eigenvalues below `1e-10 * max` are
//! discarded, and everything is expressed in the surviving orthonormal
//! basis. Inner products are linear in the first slot and conjugate-linear
//! in the second throughout.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::rep::{isotropy_regular, regular_rep, BasisLabel, MatrixRep};
use crate::spectral::{hermitian_eigen, spectral_norm, ComplexMatrix};

const REP_GATE: f64 = 1e-10;
const QUOTIENT_CUTOFF: f64 = 1e-10;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// A vector in the module of functions on the source fiber at one unit.
#[derive(Debug, Clone)]
pub struct ModuleVector {
    groupoid: Arc<FiniteGroupoid>,
    base_unit: usize,
    fiber: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl ModuleVector {
    /// Zero vector based at `x`.
    pub fn zero(groupoid: &Arc<FiniteGroupoid>, x: usize) -> Result<Self> {
        let fiber = groupoid.fibers(x)?.source_fiber.clone();
        let coeffs = vec![czero(); fiber.len()];
        Ok(ModuleVector { groupoid: Arc::clone(groupoid), base_unit: x, fiber, coeffs })
    }

    /// Indicator of one fiber arrow.
    pub fn basis_vector(groupoid: &Arc<FiniteGroupoid>, x: usize, gamma: usize) -> Result<Self> {
        let mut v = ModuleVector::zero(groupoid, x)?;
        let idx = v
            .fiber
            .binary_search(&gamma)
            .map_err(|_| Error::NotInFiber { arrow: gamma, unit: x })?;
        v.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Vector from coefficients listed in ascending fiber order.
    pub fn from_coeffs(
        groupoid: &Arc<FiniteGroupoid>,
        x: usize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        let fiber = groupoid.fibers(x)?.source_fiber.clone();
        if coeffs.len() != fiber.len() {
            return Err(Error::MalformedSpec(format!(
                "coefficient vector has length {}, fiber at {} has {}",
                coeffs.len(),
                x,
                fiber.len()
            )));
        }
        Ok(ModuleVector { groupoid: Arc::clone(groupoid), base_unit: x, fiber, coeffs })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn base_unit(&self) -> usize {
        self.base_unit
    }

    /// Fiber arrows indexing the coefficients, ascending.
    pub fn fiber(&self) -> &[usize] {
        &self.fiber
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at a fiber arrow.
    pub fn coeff_at(&self, gamma: usize) -> Result<Complex64> {
        let idx = self
            .fiber
            .binary_search(&gamma)
            .map_err(|_| Error::NotInFiber { arrow: gamma, unit: self.base_unit })?;
        Ok(self.coeffs[idx])
    }

    /// Euclidean norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scalar inner product, linear in `self`.
    pub fn inner_l2(&self, other: &ModuleVector) -> Result<Complex64> {
        self.check_companion(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    /// Scale by a complex scalar.
    pub fn scale(&self, z: Complex64) -> ModuleVector {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= z;
        }
        out
    }

    /// Sum of two vectors over the same fiber.
    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.check_companion(other)?;
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += d;
        }
        Ok(out)
    }

    /// Left action of the convolution algebra:
    /// `(f . phi)(g) = sum over g1 g2 = g of f(g1) phi(g2)`.
    pub fn act(&self, f: &AlgebraElement) -> Result<ModuleVector> {
        if !crate::algebra::same_groupoid_element(f, &self.groupoid) {
            return Err(Error::GroupoidMismatch);
        }
        let g = &self.groupoid;
        let mut out = ModuleVector::zero(g, self.base_unit)?;
        for (idx2, &g2) in self.fiber.iter().enumerate() {
            let c2 = self.coeffs[idx2];
            if c2.norm_sqr() == 0.0 {
                continue;
            }
            let mid = g.arrows()[g2].range;
            for &g1 in &g.fibers(mid)?.source_fiber {
                let p = g.compose(g1, g2)?;
                let slot = out.fiber.binary_search(&p).expect("product stays in fiber");
                out.coeffs[slot] += f.coeff(g1) * c2;
            }
        }
        Ok(out)
    }

    /// Right translation by an isotropy element:
    /// `(R_zeta phi)(g) = phi(g . zeta)`.
    pub fn translate(&self, zeta: usize) -> Result<ModuleVector> {
        let g = &self.groupoid;
        let iso = &g.fibers(self.base_unit)?.isotropy;
        if iso.binary_search(&zeta).is_err() {
            return Err(Error::NotInIsotropy { arrow: zeta, unit: self.base_unit });
        }
        let mut out = ModuleVector::zero(g, self.base_unit)?;
        for (idx, &gamma) in self.fiber.iter().enumerate() {
            let translated = g.compose(gamma, zeta)?;
            let slot = self.fiber.binary_search(&translated).expect("translation stays in fiber");
            out.coeffs[idx] = self.coeffs[slot];
        }
        Ok(out)
    }

    fn check_companion(&self, other: &ModuleVector) -> Result<()> {
        if !Arc::ptr_eq(&self.groupoid, &other.groupoid)
            && !self.groupoid.structural_eq(&other.groupoid)
        {
            return Err(Error::GroupoidMismatch);
        }
        if self.base_unit != other.base_unit {
            return Err(Error::BaseUnitMismatch { left: self.base_unit, right: other.base_unit });
        }
        Ok(())
    }
}

/// Algebra-valued pairing of two module vectors based at the same unit.
///
/// The result is supported on the isotropy group of the base unit; its
/// value at the base unit itself is the squared Euclidean norm when
/// `phi = psi`. Linear in `psi`, conjugate-linear in `phi`.
pub fn module_inner(phi: &ModuleVector, psi: &ModuleVector) -> Result<AlgebraElement> {
    phi.check_companion(psi)?;
    let g = phi.groupoid();
    let x = phi.base_unit();
    let iso = g.fibers(x)?.isotropy.clone();
    let mut out = AlgebraElement::zero(g);
    let mut coeffs = out.coeffs().to_vec();
    for &zeta in &iso {
        let zeta_inv = g.inverse(zeta)?;
        let mut total = czero();
        for (idx, &gamma) in phi.fiber.iter().enumerate() {
            // gamma . inverse(zeta) enumerates the factorizations of zeta.
            let shifted = g.compose(gamma, zeta_inv)?;
            let slot = phi.fiber.binary_search(&shifted).expect("stays in fiber");
            total += phi.coeffs[slot].conj() * psi.coeffs[idx];
        }
        coeffs[zeta] = total;
    }
    out = AlgebraElement::from_coeffs(g, coeffs)?;
    Ok(out)
}

/// Module norm: operator norm of the pairing in the isotropy left regular
/// representation, square-rooted.
pub fn module_norm(phi: &ModuleVector) -> Result<f64> {
    let pairing = module_inner(phi, phi)?;
    let rep = isotropy_regular(&pairing, phi.base_unit())?;
    Ok(spectral_norm(&rep.matrix)?.max(0.0).sqrt())
}

/// The coefficient-preserving embedding of the module into the fiber
/// Hilbert space. Its Euclidean norm never exceeds the module norm.
pub fn l2_embedding(phi: &ModuleVector) -> Vec<Complex64> {
    phi.coeffs().to_vec()
}

/// Evaluation of an isotropy-supported algebra element at a group element;
/// a coefficient functional bounded by the regular-representation norm.
pub fn coefficient_functional(b: &AlgebraElement, x: usize, zeta: usize) -> Result<Complex64> {
    let g = b.groupoid();
    let iso = &g.fibers(x)?.isotropy;
    for gamma in b.support() {
        if iso.binary_search(&gamma).is_err() {
            return Err(Error::SupportOutsideIsotropy { arrow: gamma });
        }
    }
    if iso.binary_search(&zeta).is_err() {
        return Err(Error::NotInIsotropy { arrow: zeta, unit: x });
    }
    Ok(b.coeff(zeta))
}

/// A unitary representation of one isotropy group, given by explicit
/// images of its elements.
#[derive(Debug, Clone)]
pub struct IsotropyRep {
    groupoid: Arc<FiniteGroupoid>,
    unit: usize,
    elements: Vec<usize>,
    dim: usize,
    images: Vec<ComplexMatrix>,
}

impl IsotropyRep {
    /// Build from explicit images (parallel to the ascending element list)
    /// and validate: square equal dimensions, identity at the unit,
    /// multiplicative, unitary, all within `1e-10`.
    pub fn from_images(
        groupoid: &Arc<FiniteGroupoid>,
        x: usize,
        images: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let elements = groupoid.fibers(x)?.isotropy.clone();
        if images.len() != elements.len() {
            return Err(Error::InvalidRep(format!(
                "expected {} images, found {}",
                elements.len(),
                images.len()
            )));
        }
        let dim = images.first().map(|m| m.rows()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidRep("representation dimension must be positive".into()));
        }
        for m in &images {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidRep(format!(
                    "all images must be {dim} x {dim} matrices"
                )));
            }
        }
        let rep = IsotropyRep {
            groupoid: Arc::clone(groupoid),
            unit: x,
            elements,
            dim,
            images,
        };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.groupoid;
        let eye = ComplexMatrix::identity(self.dim);
        let unit_image = self.image(self.unit)?;
        if unit_image.sub(&eye).max_abs() > REP_GATE {
            return Err(Error::InvalidRep("identity element must map to the identity".into()));
        }
        for (i, &h) in self.elements.iter().enumerate() {
            let m = &self.images[i];
            let defect = m.dagger().mul(m).sub(&eye).max_abs();
            if defect > REP_GATE {
                return Err(Error::InvalidRep(format!(
                    "image of element {h} is not unitary (defect {defect:.3e})"
                )));
            }
        }
        for &h1 in &self.elements {
            for &h2 in &self.elements {
                let product = g.compose(h1, h2)?;
                let lhs = self.image(product)?;
                let rhs = self.image(h1)?.mul(self.image(h2)?);
                if lhs.sub(&rhs).max_abs() > REP_GATE {
                    return Err(Error::InvalidRep(format!(
                        "images are not multiplicative at elements {h1}, {h2}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Left regular representation of the isotropy group.
    pub fn left_regular(groupoid: &Arc<FiniteGroupoid>, x: usize) -> Result<Self> {
        let elements = groupoid.fibers(x)?.isotropy.clone();
        let k = elements.len();
        let mut images = Vec::with_capacity(k);
        for &h in &elements {
            let mut m = ComplexMatrix::zeros(k, k);
            for (col, &h1) in elements.iter().enumerate() {
                let target = groupoid.compose(h, h1)?;
                let row = elements.binary_search(&target).expect("group closed");
                m.set(row, col, Complex64::new(1.0, 0.0));
            }
            images.push(m);
        }
        IsotropyRep::from_images(groupoid, x, images)
    }

    /// One-dimensional trivial representation.
    pub fn trivial(groupoid: &Arc<FiniteGroupoid>, x: usize) -> Result<Self> {
        let k = groupoid.fibers(x)?.isotropy.len();
        let images = vec![ComplexMatrix::identity(1); k];
        IsotropyRep::from_images(groupoid, x, images)
    }

    /// Character `k` of a cyclic isotropy group: a generator of order `n`
    /// maps to `exp(2 pi i k / n)`.
    pub fn character(groupoid: &Arc<FiniteGroupoid>, x: usize, k: usize) -> Result<Self> {
        let elements = groupoid.fibers(x)?.isotropy.clone();
        let n = elements.len();
        let order_of = |h: usize| -> Result<usize> {
            let mut power = h;
            let mut ord = 1;
            while power != x {
                power = groupoid.compose(h, power)?;
                ord += 1;
                if ord > n {
                    return Err(Error::InvalidRep("isotropy power walk runaway".into()));
                }
            }
            Ok(ord)
        };
        let mut generator = None;
        for &h in &elements {
            if order_of(h)? == n {
                generator = Some(h);
                break;
            }
        }
        let Some(generator) = generator else {
            return Err(Error::InvalidRep(format!(
                "isotropy group at unit {x} is not cyclic; characters need a generator"
            )));
        };
        // exponent_of[h] = j with generator^j = h.
        let mut exponent = vec![0usize; n];
        let mut power = x;
        for j in 0..n {
            let pos = elements.binary_search(&power).expect("powers stay in group");
            exponent[pos] = j;
            power = groupoid.compose(generator, power)?;
        }
        let tau = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        let images = (0..n)
            .map(|pos| {
                let angle = tau * exponent[pos] as f64;
                ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(angle.cos(), angle.sin()))
            })
            .collect();
        IsotropyRep::from_images(groupoid, x, images)
    }

    /// Block-diagonal direct sum with another representation of the same
    /// isotropy group.
    pub fn direct_sum(&self, other: &IsotropyRep) -> Result<IsotropyRep> {
        if self.unit != other.unit || !self.groupoid.structural_eq(&other.groupoid) {
            return Err(Error::InvalidRep(
                "direct sum needs representations of the same isotropy group".into(),
            ));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| ComplexMatrix::block_diag(&[a, b]))
            .collect();
        IsotropyRep::from_images(&self.groupoid, self.unit, images)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    /// Isotropy elements in image order (ascending arrow id).
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of the isotropy element `zeta`.
    pub fn image(&self, zeta: usize) -> Result<&ComplexMatrix> {
        let idx = self
            .elements
            .binary_search(&zeta)
            .map_err(|_| Error::NotInIsotropy { arrow: zeta, unit: self.unit })?;
        Ok(&self.images[idx])
    }
}

/// The finite-dimensional carrier of an induced representation: the tensor
/// span of fiber basis vectors against the representation space, quotiented
/// by the null space of its Gram form and expressed in an orthonormal
/// basis.
#[derive(Debug, Clone)]
pub struct InducedSpace {
    groupoid: Arc<FiniteGroupoid>,
    unit: usize,
    rep_dim: usize,
    fiber: Vec<usize>,
    tensor_basis: Vec<(usize, usize)>,
    gram: ComplexMatrix,
    quotient: ComplexMatrix,
    kept_eigenvalues: Vec<f64>,
}

impl InducedSpace {
    /// Build the Gram matrix of the elementary tensors for `rep` and
    /// orthonormalize its column space.
    pub fn new(rep: &IsotropyRep) -> Result<Self> {
        let g = rep.groupoid();
        let x = rep.unit();
        let fiber = g.fibers(x)?.source_fiber.clone();
        let d = rep.dim();
        let n = fiber.len() * d;
        let tensor_basis: Vec<(usize, usize)> = fiber
            .iter()
            .flat_map(|&gamma| (0..d).map(move |k| (gamma, k)))
            .collect();

        // Gram[(g', l), (g, k)] = <e_g (x) xi_k, e_g' (x) xi_l>
        //                       = [range(g) = range(g')] L(inverse(g') g)[l, k].
        let mut gram = ComplexMatrix::zeros(n, n);
        for (bi, &(gp, _)) in tensor_basis.iter().enumerate().step_by(d) {
            let row_arrow = bi / d;
            for (bj, &(ga, _)) in tensor_basis.iter().enumerate().step_by(d) {
                let col_arrow = bj / d;
                if g.arrows()[gp].range != g.arrows()[ga].range {
                    continue;
                }
                let h = g.compose(g.inverse(gp)?, ga)?;
                let image = rep.image(h)?;
                for l in 0..d {
                    for k in 0..d {
                        gram.set(row_arrow * d + l, col_arrow * d + k, image.get(l, k));
                    }
                }
            }
        }

        let (values, vectors) = hermitian_eigen(&gram)?;
        let max = values.last().copied().unwrap_or(0.0).max(0.0);
        let cutoff = QUOTIENT_CUTOFF * max;
        let mut kept_eigenvalues = Vec::new();
        let mut columns: Vec<Vec<Complex64>> = Vec::new();
        for (idx, &value) in values.iter().enumerate() {
            if value < cutoff || value <= 0.0 {
                continue;
            }
            kept_eigenvalues.push(value);
            let scale = 1.0 / value.sqrt();
            columns.push(
                vectors.column(idx).into_iter().map(|c| c * scale).collect(),
            );
        }
        let r = columns.len();
        let quotient = ComplexMatrix::from_fn(n, r, |i, j| columns[j][i]);

        Ok(InducedSpace {
            groupoid: Arc::clone(g),
            unit: x,
            rep_dim: d,
            fiber,
            tensor_basis,
            gram,
            quotient,
            kept_eigenvalues,
        })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    /// Dimension of the orthonormalized quotient.
    pub fn dim(&self) -> usize {
        self.kept_eigenvalues.len()
    }

    /// Dimension of the raw tensor span.
    pub fn raw_dim(&self) -> usize {
        self.tensor_basis.len()
    }

    /// Elementary tensor labels in basis order.
    pub fn tensor_basis(&self) -> &[(usize, usize)] {
        &self.tensor_basis
    }

    /// Gram matrix of the elementary tensors.
    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    /// Gram eigenvalues that survived the cutoff, ascending. When the
    /// Gram matrix is exactly the identity the quotient basis coincides
    /// with the tensor basis, so trivial cases represent literally.
    pub fn kept_eigenvalues(&self) -> &[f64] {
        &self.kept_eigenvalues
    }

    /// Quotient coordinates of a raw tensor-span vector.
    pub fn vector_coords(&self, raw: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(raw.len(), self.raw_dim(), "raw vector length mismatch");
        let gr = self.gram.apply(raw);
        self.quotient.dagger().apply(&gr)
    }

    /// Matrix of the induced operator of `f` on the orthonormal quotient
    /// basis.
    pub fn represent(&self, f: &AlgebraElement) -> Result<ComplexMatrix> {
        if !crate::algebra::same_groupoid_element(f, &self.groupoid) {
            return Err(Error::GroupoidMismatch);
        }
        let lambda = regular_rep(f, self.unit)?.matrix;
        let t = lambda.kron(&ComplexMatrix::identity(self.rep_dim));
        let gt = self.gram.mul(&t);
        Ok(self.quotient.dagger().mul(&gt).mul(&self.quotient))
    }
}

/// Induced representation of `f` through the isotropy representation
/// `rep`, on the orthonormal quotient basis.
pub fn induce(rep: &IsotropyRep, f: &AlgebraElement) -> Result<MatrixRep> {
    let space = InducedSpace::new(rep)?;
    let matrix = space.represent(f)?;
    let basis = (0..space.dim()).map(BasisLabel::Orthonormal).collect();
    Ok(MatrixRep { basis, matrix })
}

/// The unitary identifying the fiber Hilbert space at `x` with the space
/// induced from the isotropy left regular representation: the fiber basis
/// vector at `g` maps to the class of `e_g (x) e_identity`. Returns the
/// unitary (columns over the fiber basis) together with the induced space
/// it targets.
pub fn induced_regular_unitary(
    groupoid: &Arc<FiniteGroupoid>,
    x: usize,
) -> Result<(MatrixRep, InducedSpace)> {
    let rep = IsotropyRep::left_regular(groupoid, x)?;
    let space = InducedSpace::new(&rep)?;
    let identity_slot = rep
        .elements()
        .binary_search(&x)
        .expect("identity is an isotropy element");
    let n = space.raw_dim();
    let fiber = space.fiber.clone();
    let d = space.rep_dim;
    let mut u = ComplexMatrix::zeros(space.dim(), fiber.len());
    for (col, _) in fiber.iter().enumerate() {
        let mut raw = vec![czero(); n];
        raw[col * d + identity_slot] = Complex64::new(1.0, 0.0);
        let coords = space.vector_coords(&raw);
        for (row, v) in coords.into_iter().enumerate() {
            u.set(row, col, v);
        }
    }
    let basis = fiber.into_iter().map(BasisLabel::Arrow).collect();
    Ok((MatrixRep { basis, matrix: u }, space))
}

/// Residual of the module pairing identity
/// `<phi, f . psi>(zeta) = < lambda(f) R_zeta j(psi), j(phi) >`.
pub fn pairing_identity_residual(
    f: &AlgebraElement,
    phi: &ModuleVector,
    psi: &ModuleVector,
    zeta: usize,
) -> Result<f64> {
    phi.check_companion(psi)?;
    if !crate::algebra::same_groupoid_element(f, phi.groupoid()) {
        return Err(Error::GroupoidMismatch);
    }
    let x = phi.base_unit();
    let lhs = {
        let acted = psi.act(f)?;
        let pairing = module_inner(phi, &acted)?;
        coefficient_functional(&pairing, x, zeta)?
    };
    let rhs = {
        let translated = psi.translate(zeta)?;
        let lambda = regular_rep(f, x)?.matrix;
        let image = lambda.apply(translated.coeffs());
        image
            .iter()
            .zip(phi.coeffs())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
    };
    Ok((lhs - rhs).norm())
}

/// Vanishing transfer: when the regular representation at `x` annihilates
/// `f` (norm at most `1e-10`), the representation induced from the isotropy
/// left regular representation must annihilate it too (norm at most
/// `1e-9`). Vacuously true otherwise.
pub fn induced_vanishing(
    groupoid: &Arc<FiniteGroupoid>,
    x: usize,
    f: &AlgebraElement,
) -> Result<bool> {
    let lambda_norm = spectral_norm(&regular_rep(f, x)?.matrix)?;
    if lambda_norm > 1e-10 {
        return Ok(true);
    }
    let rep = IsotropyRep::left_regular(groupoid, x)?;
    let space = InducedSpace::new(&rep)?;
    let induced_norm = spectral_norm(&space.represent(f)?)?;
    Ok(induced_norm <= 1e-9)
}
