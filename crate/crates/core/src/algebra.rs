//! The convolution *-algebra of a finite groupoid.
//!
//! An element is a dense complex coefficient vector indexed by arrow id.
//! Convolution sums over composable factorizations,
//! `(f * h)(g) = sum over g1 g2 = g of f(g1) h(g2)`, and the involution is
//! `f*(g) = conj(f(inverse(g)))`. At finite scale this algebra already
//! carries the full C*-structure; the norm lives in the analysis module.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

/// An element of the convolution algebra, bound to its groupoid.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Vec<Complex64>,
}

/// Whether two elements may be combined: same object or structurally equal.
fn same_groupoid(a: &AlgebraElement, b: &AlgebraElement) -> bool {
    Arc::ptr_eq(&a.groupoid, &b.groupoid) || a.groupoid.structural_eq(&b.groupoid)
}

/// Whether an element lives over the given groupoid (same object or
/// structurally equal).
pub(crate) fn same_groupoid_element(a: &AlgebraElement, g: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(&a.groupoid, g) || a.groupoid.structural_eq(g)
}

impl AlgebraElement {
    /// The zero element.
    pub fn zero(groupoid: &Arc<FiniteGroupoid>) -> Self {
        AlgebraElement {
            groupoid: Arc::clone(groupoid),
            coeffs: vec![Complex64::new(0.0, 0.0); groupoid.arrow_count()],
        }
    }

    /// Point mass at the arrow `g`.
    pub fn delta(groupoid: &Arc<FiniteGroupoid>, g: usize) -> Result<Self> {
        if g >= groupoid.arrow_count() {
            return Err(Error::UnknownArrow(g));
        }
        let mut el = AlgebraElement::zero(groupoid);
        el.coeffs[g] = Complex64::new(1.0, 0.0);
        Ok(el)
    }

    /// The multiplicative unit: coefficient 1 at every unit arrow.
    pub fn unit(groupoid: &Arc<FiniteGroupoid>) -> Self {
        let mut el = AlgebraElement::zero(groupoid);
        for &u in groupoid.units() {
            el.coeffs[u] = Complex64::new(1.0, 0.0);
        }
        el
    }

    /// Element with the given dense coefficient vector.
    pub fn from_coeffs(groupoid: &Arc<FiniteGroupoid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != groupoid.arrow_count() {
            return Err(Error::MalformedSpec(format!(
                "coefficient vector has length {}, expected {}",
                coeffs.len(),
                groupoid.arrow_count()
            )));
        }
        Ok(AlgebraElement { groupoid: Arc::clone(groupoid), coeffs })
    }

    /// Element defined by a coefficient function on arrow ids.
    pub fn from_fn(groupoid: &Arc<FiniteGroupoid>, f: impl Fn(usize) -> Complex64) -> Self {
        let coeffs = (0..groupoid.arrow_count()).map(f).collect();
        AlgebraElement { groupoid: Arc::clone(groupoid), coeffs }
    }

    /// The groupoid this element lives over.
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    /// Coefficient at arrow `g`.
    pub fn coeff(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    /// Dense coefficient slice, indexed by arrow id.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Arrow ids carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(g, _)| g)
            .collect()
    }

    /// Largest coefficient modulus.
    pub fn sup_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &AlgebraElement) -> f64 {
        assert!(same_groupoid(self, other), "elements over different groupoids");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Convolution product `self * other`.
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if !same_groupoid(self, other) {
            return Err(Error::GroupoidMismatch);
        }
        let g = &self.groupoid;
        let mut out = AlgebraElement::zero(g);
        for (g1, &c1) in self.coeffs.iter().enumerate() {
            if c1.norm_sqr() == 0.0 {
                continue;
            }
            let x = g.source(g1).expect("valid arrow");
            for &g2 in &g.fibers(x).expect("valid unit").range_fiber {
                let p = g.compose_opt(g1, g2).expect("composable by construction");
                out.coeffs[p] += c1 * other.coeffs[g2];
            }
        }
        Ok(out)
    }

    /// Involution `f*(g) = conj(f(inverse(g)))`.
    pub fn adjoint(&self) -> AlgebraElement {
        let g = &self.groupoid;
        let coeffs = (0..g.arrow_count())
            .map(|gamma| self.coeffs[g.inverse(gamma).expect("valid arrow")].conj())
            .collect();
        AlgebraElement { groupoid: Arc::clone(g), coeffs }
    }

    /// Max distance between `self` and its adjoint, coefficient-wise.
    pub fn self_adjoint_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Whether the element equals its adjoint within `tol`.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_defect() <= tol
    }

    /// Scale by a complex scalar.
    pub fn scale(&self, z: Complex64) -> AlgebraElement {
        AlgebraElement {
            groupoid: Arc::clone(&self.groupoid),
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert!(same_groupoid(self, rhs), "elements over different groupoids");
        AlgebraElement {
            groupoid: Arc::clone(&self.groupoid),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert!(same_groupoid(self, rhs), "elements over different groupoids");
        AlgebraElement {
            groupoid: Arc::clone(&self.groupoid),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::build_groupoid;
    use crate::groupoid::GroupoidSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_and_unit_coefficients() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let d = AlgebraElement::delta(&g, 0).unwrap();
        assert_eq!(d.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let one = AlgebraElement::unit(&g);
        assert_eq!(one.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(AlgebraElement::delta(&g, 4).is_err());
    }

    #[test]
    fn deltas_convolve_like_arrows() {
        let g = FiniteGroupoid::pair(2).unwrap();
        // Arrow ids: (a <- b) = 2a + b. delta_(0<-1) * delta_(1<-0) = delta_(0<-0).
        let d1 = AlgebraElement::delta(&g, 1).unwrap();
        let d2 = AlgebraElement::delta(&g, 2).unwrap();
        let p = d1.convolve(&d2).unwrap();
        assert_eq!(p.support(), vec![0]);
        assert_eq!(p.coeff(0), c(1.0, 0.0));
        // Non-composable pair gives zero.
        let q = d1.convolve(&d1).unwrap();
        assert!(q.support().is_empty());
    }

    #[test]
    fn unit_is_two_sided_identity() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let one = AlgebraElement::unit(&g);
        let f = AlgebraElement::from_coeffs(
            &g,
            vec![c(0.5, -1.0), c(2.0, 0.25), c(-1.5, 3.0), c(0.0, 1.0)],
        )
        .unwrap();
        assert!(one.convolve(&f).unwrap().max_abs_diff(&f) <= 1e-15);
        assert!(f.convolve(&one).unwrap().max_abs_diff(&f) <= 1e-15);
    }

    #[test]
    fn adjoint_swaps_inverse_and_conjugates() {
        let g = FiniteGroupoid::pair(2).unwrap();
        let d = AlgebraElement::delta(&g, 1).unwrap().scale(c(0.0, 1.0));
        let adj = d.adjoint();
        assert_eq!(adj.coeff(2), c(0.0, -1.0));
        assert_eq!(adj.support(), vec![2]);
        // Involution: applying twice returns the element exactly.
        assert_eq!(d.adjoint().adjoint().coeffs(), d.coeffs());
    }

    /// Independent triple-sum oracle for ((f * h) * k)(g): enumerate all
    /// factorizations g1 g2 g3 = g directly from the composition table.
    fn triple_convolution_oracle(
        f: &AlgebraElement,
        h: &AlgebraElement,
        k: &AlgebraElement,
    ) -> Vec<Complex64> {
        let g = f.groupoid();
        let m = g.arrow_count();
        let mut out = vec![c(0.0, 0.0); m];
        for g1 in 0..m {
            for g2 in 0..m {
                let Some(p12) = g.compose_opt(g1, g2) else { continue };
                for g3 in 0..m {
                    let Some(p) = g.compose_opt(p12, g3) else { continue };
                    out[p] += f.coeff(g1) * h.coeff(g2) * k.coeff(g3);
                }
            }
        }
        out
    }

    #[test]
    fn convolution_associates_against_triple_sum() {
        let g = FiniteGroupoid::cyclic_group(3).unwrap();
        let f = AlgebraElement::from_coeffs(&g, vec![c(1.0, 2.0), c(-1.0, 0.0), c(0.0, 0.5)])
            .unwrap();
        let h = AlgebraElement::from_coeffs(&g, vec![c(0.3, 0.0), c(2.0, -1.0), c(1.0, 0.0)])
            .unwrap();
        let k = AlgebraElement::from_coeffs(&g, vec![c(0.0, 1.0), c(1.0, 0.0), c(-2.0, 0.0)])
            .unwrap();
        let oracle = triple_convolution_oracle(&f, &h, &k);
        let left = f.convolve(&h).unwrap().convolve(&k).unwrap();
        let right = f.convolve(&h.convolve(&k).unwrap()).unwrap();
        for g_id in 0..3 {
            assert!((left.coeff(g_id) - oracle[g_id]).norm() <= 1e-12);
            assert!((right.coeff(g_id) - oracle[g_id]).norm() <= 1e-12);
        }
    }

    #[test]
    fn adjoint_is_antimultiplicative() {
        let spec = GroupoidSpec::Union(vec![GroupoidSpec::Pair(2), GroupoidSpec::Pair(1)]);
        let g = build_groupoid(&spec).unwrap();
        let f = AlgebraElement::from_fn(&g, |i| c(i as f64 * 0.3 - 1.0, 0.7 - i as f64 * 0.2));
        let h = AlgebraElement::from_fn(&g, |i| c((i * i % 5) as f64 * 0.4, i as f64 * 0.1));
        // Oracle: conj((f * h)(inverse(g))) computed by a raw double loop.
        let m = g.arrow_count();
        let mut oracle = vec![c(0.0, 0.0); m];
        for g1 in 0..m {
            for g2 in 0..m {
                if let Some(p) = g.compose_opt(g1, g2) {
                    let target = g.inverse(p).unwrap();
                    oracle[target] += f.coeff(g1) * h.coeff(g2);
                }
            }
        }
        let lhs = f.convolve(&h).unwrap().adjoint();
        let rhs = h.adjoint().convolve(&f.adjoint()).unwrap();
        for g_id in 0..m {
            assert!((lhs.coeff(g_id) - oracle[g_id].conj()).norm() <= 1e-14);
            assert!((lhs.coeff(g_id) - rhs.coeff(g_id)).norm() <= 1e-14);
        }
    }

    #[test]
    fn cross_groupoid_operations_rejected() {
        let g1 = FiniteGroupoid::pair(2).unwrap();
        let g2 = FiniteGroupoid::cyclic_group(4).unwrap();
        let f = AlgebraElement::unit(&g1);
        let h = AlgebraElement::unit(&g2);
        assert!(matches!(f.convolve(&h).unwrap_err(), Error::GroupoidMismatch));
        // Structurally equal copies are accepted.
        let g1b = FiniteGroupoid::pair(2).unwrap();
        let fb = AlgebraElement::unit(&g1b);
        assert!(f.convolve(&fb).is_ok());
    }
}
