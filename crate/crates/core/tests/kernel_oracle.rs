//! Independent cross-check of the eigensolver: eigenvalues recomputed by
//! Householder tridiagonalization followed by Sturm-count bisection, an
//! algorithm sharing no code path with the rotation-based solver in the
//! crate.

use groupoidal::sampling::random_self_adjoint;
use groupoidal::{hermitian_eigenvalues, regular_rep, ComplexMatrix, GroupoidSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reduce Hermitian `a` to real symmetric tridiagonal form by Householder
/// reflections; returns the diagonal and the squared subdiagonal.
fn tridiagonalize(a: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut m = a.clone();
    for k in 0..n.saturating_sub(2) {
        let norm2: f64 = ((k + 1)..n).map(|i| m.get(i, k).norm_sqr()).sum();
        if norm2 <= 1e-300 {
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = m.get(k + 1, k);
        let phase =
            if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        for i in (k + 1)..n {
            u[i] = m.get(i, k);
        }
        u[k + 1] -= alpha;
        let unorm2: f64 = u.iter().map(|c| c.norm_sqr()).sum();
        if unorm2 <= 1e-300 {
            continue;
        }
        let unorm = unorm2.sqrt();
        for e in u.iter_mut() {
            *e /= unorm;
        }
        // M := (I - 2 u u*) M (I - 2 u u*)
        for j in 0..n {
            let w: Complex64 = ((k + 1)..n).map(|i| u[i].conj() * m.get(i, j)).sum();
            let w2 = w * 2.0;
            for i in (k + 1)..n {
                let v = m.get(i, j) - u[i] * w2;
                m.set(i, j, v);
            }
        }
        for i in 0..n {
            let w: Complex64 = ((k + 1)..n).map(|j| m.get(i, j) * u[j]).sum();
            let w2 = w * 2.0;
            for j in (k + 1)..n {
                let v = m.get(i, j) - w2 * u[j].conj();
                m.set(i, j, v);
            }
        }
    }
    let diag = (0..n).map(|i| m.get(i, i).re).collect();
    let sub2 = (0..n.saturating_sub(1)).map(|i| m.get(i + 1, i).norm_sqr()).collect();
    (diag, sub2)
}

/// Number of eigenvalues strictly below `x`, from the classical Sturm
/// pivot recurrence on the tridiagonal form.
fn count_below(diag: &[f64], sub2: &[f64], x: f64) -> usize {
    let mut count = 0usize;
    let mut prev = 1.0f64;
    for (i, &d) in diag.iter().enumerate() {
        let mut q = d - x;
        if i > 0 {
            q -= sub2[i - 1] / prev;
        }
        if q.abs() < 1e-300 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
        prev = q;
    }
    count
}

/// All eigenvalues of Hermitian `a`, ascending, by bisection on the Sturm
/// count inside the Gershgorin interval.
fn sturm_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    if n == 0 {
        return Vec::new();
    }
    let (diag, sub2) = tridiagonalize(a);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { sub2[i - 1].sqrt() } else { 0.0 };
        let right = if i + 1 < n { sub2[i].sqrt() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 1e-8 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;
    (0..n)
        .map(|k| {
            let mut a_lo = lo;
            let mut a_hi = hi;
            for _ in 0..200 {
                let mid = 0.5 * (a_lo + a_hi);
                if count_below(&diag, &sub2, mid) >= k + 1 {
                    a_hi = mid;
                } else {
                    a_lo = mid;
                }
                if a_hi - a_lo <= 1e-13 * (hi - lo).max(1.0) {
                    break;
                }
            }
            0.5 * (a_lo + a_hi)
        })
        .collect()
}

fn assert_spectra_agree(a: &ComplexMatrix, context: &str) {
    let solver = hermitian_eigenvalues(a).unwrap();
    let oracle = sturm_eigenvalues(a);
    assert_eq!(solver.len(), oracle.len(), "{context}: eigenvalue counts differ");
    let scale = oracle.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    for (i, (s, o)) in solver.iter().zip(&oracle).enumerate() {
        assert!(
            (s - o).abs() <= 1e-9 * scale,
            "{context}: eigenvalue {i}: solver {s}, oracle {o}"
        );
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, Complex64::new(rng.gen_range(-3.0..=3.0), 0.0));
        for j in (i + 1)..n {
            let v = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    m
}

#[test]
fn solver_matches_sturm_bisection_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 1..=12 {
        for _ in 0..6 {
            let m = random_hermitian(n, &mut rng);
            assert_spectra_agree(&m, &format!("random {n}x{n}"));
        }
    }
}

#[test]
fn solver_matches_oracle_on_structured_matrices() {
    // Identity, zero, rank-one, and a matrix with a tight cluster.
    assert_spectra_agree(&ComplexMatrix::identity(5), "identity");
    assert_spectra_agree(&ComplexMatrix::zeros(4, 4), "zero");

    let mut rank_one = ComplexMatrix::zeros(4, 4);
    let v = [
        Complex64::new(1.0, 0.5),
        Complex64::new(-0.3, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.7, -0.1),
    ];
    for i in 0..4 {
        for j in 0..4 {
            rank_one.set(i, j, v[i] * v[j].conj());
        }
    }
    assert_spectra_agree(&rank_one, "rank one");

    let mut clustered = ComplexMatrix::identity(6);
    clustered.set(0, 1, Complex64::new(1e-7, 0.0));
    clustered.set(1, 0, Complex64::new(1e-7, 0.0));
    clustered.set(5, 5, Complex64::new(1.0 + 1e-7, 0.0));
    assert_spectra_agree(&clustered, "clustered");

    // Circulant with a near-degenerate pair; a case where unpivoted
    // elimination-based counting goes wrong.
    let c = [
        Complex64::new(0.5698, 0.0),
        Complex64::new(0.5861, 0.0017),
        Complex64::new(-0.8162, 0.0),
    ];
    let circulant = ComplexMatrix::from_fn(4, 4, |i, j| match (4 + i - j) % 4 {
        0 => c[0],
        1 => c[1],
        2 => c[2],
        _ => c[1].conj(),
    });
    assert_spectra_agree(&circulant, "circulant");
}

#[test]
fn solver_matches_oracle_on_fiber_images() {
    // The matrices the crate actually diagonalizes: fiber images of
    // self-adjoint convolution algebra elements.
    let g = groupoidal::build_groupoid(&GroupoidSpec::Union(vec![
        GroupoidSpec::Pair(3),
        GroupoidSpec::Group {
            table: vec![
                vec![0, 1, 2, 3],
                vec![1, 2, 3, 0],
                vec![2, 3, 0, 1],
                vec![3, 0, 1, 2],
            ],
        },
    ]))
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..8 {
        let a = random_self_adjoint(&g, &mut rng);
        for &x in g.units() {
            let image = regular_rep(&a, x).unwrap().matrix;
            assert_spectra_agree(&image, &format!("fiber image at {x}"));
        }
    }
}
