//! Dense complex matrices and the eigenvalue kernel.
//!
//! Everything downstream (operator norms, singular values, induced-space
//! orthonormalization) reduces to Hermitian eigenproblems, solved here by
//! cyclic Jacobi with complex Givens rotations: sweeps run over all
//! off-diagonal positions in row order, each rotation annihilating one
//! entry exactly. Convergence is declared when the off-diagonal Frobenius
//! mass drops under `1e-13 * ||A||_F`; the sweep cap is 100.
//!
//! Jacobi is quadratically convergent once sweeps settle and computes small
//! eigenvalues of well-scaled Hermitian matrices to high absolute accuracy,
//! which is what the norm and invertibility contracts need.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SWEEP_CAP: usize = 100;
const CONVERGENCE_FACTOR: f64 = 1e-13;
const HERMITIAN_GATE: f64 = 1e-10;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Matrix with entries from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Matrix product.
    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Column as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to the conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[&ComplexMatrix]) -> ComplexMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j));
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for ComplexMatrix {
    /// `<rows> <cols>` header, then one row per line as `re im` pairs.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                let v = self.get(i, j);
                write!(f, "{:.16e} {:.16e}", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One cyclic Jacobi rotation annihilating the (p, q) entry of the
/// Hermitian working matrix `w`, accumulated into `vecs`.
fn rotate(w: &mut ComplexMatrix, vecs: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = w.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = w.get(p, p).re;
    let aqq = w.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let sigma = t * c;
    let phase = apq / r;
    let s = phase * sigma;
    let n = w.rows();

    // w <- w . V, with V the identity outside rows/cols p, q and
    // V[p][p] = c, V[p][q] = s, V[q][p] = -conj(s), V[q][q] = c.
    for k in 0..n {
        let wkp = w.get(k, p);
        let wkq = w.get(k, q);
        w.set(k, p, wkp * c - wkq * s.conj());
        w.set(k, q, wkp * s + wkq * c);
    }
    // w <- V^H . w
    for k in 0..n {
        let wpk = w.get(p, k);
        let wqk = w.get(q, k);
        w.set(p, k, wpk * c - wqk * s);
        w.set(q, k, wpk * s.conj() + wqk * c);
    }
    // The rotation zeroes (p, q) exactly; pin the invariants.
    w.set(p, q, Complex64::new(0.0, 0.0));
    w.set(q, p, Complex64::new(0.0, 0.0));
    let dp = w.get(p, p);
    let dq = w.get(q, q);
    w.set(p, p, Complex64::new(dp.re, 0.0));
    w.set(q, q, Complex64::new(dq.re, 0.0));

    // vecs <- vecs . V
    for k in 0..n {
        let ekp = vecs.get(k, p);
        let ekq = vecs.get(k, q);
        vecs.set(k, p, ekp * c - ekq * s.conj());
        vecs.set(k, q, ekp * s + ekq * c);
    }
}

/// Full Hermitian eigendecomposition `a = V diag(values) V^H`.
///
/// Values ascend; `V`'s columns are the matching orthonormal eigenvectors.
/// The input may deviate from exact Hermitian symmetry by at most `1e-10`
/// entrywise; the working copy is symmetrized before iteration.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if a.rows() != a.cols() {
        return Err(Error::MalformedSpec("eigenvalues need a square matrix".into()));
    }
    let dev = a.hermitian_defect();
    if !(dev <= HERMITIAN_GATE) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = a.rows();
    let mut w = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a.get(i, i).re, 0.0)
        } else {
            (a.get(i, j) + a.get(j, i).conj()) * 0.5
        }
    });
    let mut vecs = ComplexMatrix::identity(n);
    let tol = CONVERGENCE_FACTOR * w.fro_norm();

    let mut converged = n <= 1 || off_diagonal_mass(&w) <= tol;
    if !converged {
        for _ in 0..SWEEP_CAP {
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut w, &mut vecs, p, q);
                }
            }
            if off_diagonal_mass(&w) <= tol {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: SWEEP_CAP });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.get(i, i).re.partial_cmp(&w.get(j, j).re).expect("finite"));
    let values = order.iter().map(|&i| w.get(i, i).re).collect();
    let sorted_vecs = ComplexMatrix::from_fn(n, n, |i, j| vecs.get(i, order[j]));
    Ok((values, sorted_vecs))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|(values, _)| values)
}

/// Operator (spectral) norm: largest singular value, via `A^H A`.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let gram = a.dagger().mul(a);
    let values = hermitian_eigenvalues(&gram)?;
    Ok(values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Smallest singular value of a square matrix, via `A^H A`.
pub fn min_singular_value(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() != a.cols() {
        return Err(Error::MalformedSpec("min_singular_value needs a square matrix".into()));
    }
    if a.rows() == 0 {
        return Ok(0.0);
    }
    let gram = a.dagger().mul(a);
    let values = hermitian_eigenvalues(&gram)?;
    Ok(values.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Exists to cross-check the singular-value route on well-conditioned
/// inputs; not part of the norm computation path.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::MalformedSpec("inversion needs a square matrix".into()));
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut inv = ComplexMatrix::identity(n);
    let pivot_floor = f64::EPSILON * a.max_abs() * n as f64;
    for col in 0..n {
        let (best, best_mag) = (col..n)
            .map(|r| (r, w.get(r, col).norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
            .expect("non-empty");
        if best_mag <= pivot_floor {
            return Err(Error::SingularMatrix);
        }
        if best != col {
            for j in 0..n {
                let (a1, a2) = (w.get(col, j), w.get(best, j));
                w.set(col, j, a2);
                w.set(best, j, a1);
                let (b1, b2) = (inv.get(col, j), inv.get(best, j));
                inv.set(col, j, b2);
                inv.set(best, j, b1);
            }
        }
        let pivot = w.get(col, col);
        for j in 0..n {
            w.set(col, j, w.get(col, j) / pivot);
            inv.set(col, j, inv.get(col, j) / pivot);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = w.get(r, col);
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                let wv = w.get(r, j) - factor * w.get(col, j);
                w.set(r, j, wv);
                let iv = inv.get(r, j) - factor * inv.get(col, j);
                inv.set(r, j, iv);
            }
        }
    }
    Ok(inv)
}
