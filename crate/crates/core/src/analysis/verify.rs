//! Seeded self-check suite: every structural law and numerical identity
//! the crate relies on, re-derived from the public API and checked on one
//! groupoid with randomized and structured inputs.
//!
//! The suite is deterministic in the seed: the same groupoid, trial count,
//! and seed produce a byte-identical report.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::analysis::{
    invertible_family, invertible_oracle, norm_profile, oracle_norm, singularity_witness,
    spectrum_report, UnitScope,
};
use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::induction::{
    coefficient_functional, induced_regular_unitary, induced_vanishing, module_inner,
    module_norm, pairing_identity_residual, InducedSpace,
};
use crate::rep::{isotropy_regular, orbit_intertwiner, regular_rep, translation_unitary};
use crate::sampling::{
    isotropy_rep_menu, random_element, random_module_vector, random_positive,
    random_self_adjoint, structured_elements,
};
use crate::spectral::{hermitian_eigenvalues, min_singular_value, spectral_norm, ComplexMatrix};

/// One named check with its outcome and a short numeric summary.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the whole suite on one groupoid.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub arrows: usize,
    pub units: usize,
    pub orbits: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub outcomes: Vec<PropertyOutcome>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "checking {} arrows, {} units, {} orbit(s); seed {}, {} trials",
            self.arrows, self.units, self.orbits, self.seed, self.trials
        )?;
        for o in &self.outcomes {
            writeln!(
                f,
                "{} {:<34} {}",
                if o.passed { "pass" } else { "FAIL" },
                o.name,
                o.detail
            )?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        write!(
            f,
            "result: {} ({passed}/{} checks)",
            if self.passed { "PASS" } else { "FAIL" },
            self.outcomes.len()
        )
    }
}

fn outcome(name: &str, passed: bool, detail: String) -> PropertyOutcome {
    PropertyOutcome { name: name.to_string(), passed, detail }
}

fn residual_outcome(name: &str, worst: f64, tol: f64, cases: usize) -> PropertyOutcome {
    outcome(
        name,
        worst <= tol,
        format!("worst residual {worst:.3e} over {cases} cases (tolerance {tol:.1e})"),
    )
}

/// Run the full suite on one groupoid. `trials` scales the randomized
/// sweeps; matrix-heavy checks use a capped share of it.
pub fn verify_suite(g: &Arc<FiniteGroupoid>, trials: usize, seed: u64) -> Result<VerifyReport> {
    let trials = trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();

    outcomes.push(check_axioms(g)?);
    outcomes.push(check_orbit_partition(g)?);
    outcomes.push(check_isotropy_closure(g)?);
    outcomes.push(check_convolution_associativity(g, trials, &mut rng)?);
    outcomes.push(check_unit_identity(g, trials, &mut rng)?);
    outcomes.push(check_adjoint_laws(g, trials, &mut rng)?);
    outcomes.push(check_fiber_entry_formula(g, trials.min(20), &mut rng)?);
    outcomes.push(check_fiber_star_homomorphism(g, trials.min(20), &mut rng)?);
    outcomes.push(check_translation_unitaries(g, trials.min(5), &mut rng)?);
    outcomes.push(check_orbit_intertwiners(g, trials.min(5), &mut rng)?);
    outcomes.push(check_pairing_positivity(g, trials.min(25), &mut rng)?);
    outcomes.push(check_module_norm_bound(g, trials.min(25), &mut rng)?);
    outcomes.push(check_pairing_identity(g, trials.min(10), &mut rng)?);
    outcomes.push(check_coefficient_bound(g, trials.min(25), &mut rng)?);
    outcomes.push(check_induced_unit_identity(g)?);
    outcomes.push(check_induced_star_homomorphism(g, trials.min(3), &mut rng)?);
    outcomes.push(check_induced_regular_equivalence(g, trials.min(5), &mut rng)?);
    outcomes.push(check_induced_vanishing(g)?);
    outcomes.push(check_cstar_identity(g, trials.min(10), &mut rng)?);
    outcomes.push(check_norm_sufficiency(g, trials.min(25), &mut rng)?);
    outcomes.push(check_norm_attainment(g, trials.min(10), &mut rng)?);
    outcomes.push(check_singularity_witness(g, trials.min(10), &mut rng)?);
    outcomes.push(check_invertibility_consistency(g, trials.min(25), &mut rng)?);
    outcomes.push(check_spectrum_orbit_invariance(g, trials.min(5), &mut rng)?);

    let passed = outcomes.iter().all(|o| o.passed);
    Ok(VerifyReport {
        arrows: g.arrow_count(),
        units: g.units().len(),
        orbits: g.orbits().classes.len(),
        trials,
        seed,
        passed,
        outcomes,
    })
}

fn check_axioms(g: &Arc<FiniteGroupoid>) -> Result<PropertyOutcome> {
    let mut bad = 0usize;
    let m = g.arrow_count();
    for gamma in 0..m {
        let s = g.source(gamma)?;
        let r = g.range(gamma)?;
        let inv = g.inverse(gamma)?;
        if !g.is_unit(s) || !g.is_unit(r) {
            bad += 1;
        }
        if g.compose_opt(gamma, s) != Some(gamma) || g.compose_opt(r, gamma) != Some(gamma) {
            bad += 1;
        }
        if g.compose_opt(gamma, inv) != Some(r) || g.compose_opt(inv, gamma) != Some(s) {
            bad += 1;
        }
        if g.inverse(inv)? != gamma {
            bad += 1;
        }
    }
    let mut checked = 0usize;
    for g1 in 0..m {
        for g2 in 0..m {
            let defined = g.compose_opt(g1, g2);
            let composable = g.source(g1)? == g.range(g2)?;
            if defined.is_some() != composable {
                bad += 1;
                continue;
            }
            let Some(p) = defined else { continue };
            if g.source(p)? != g.source(g2)? || g.range(p)? != g.range(g1)? {
                bad += 1;
            }
            for g3 in 0..m {
                let Some(q) = g.compose_opt(g2, g3) else { continue };
                checked += 1;
                if g.compose_opt(p, g3) != g.compose_opt(g1, q) {
                    bad += 1;
                }
            }
        }
    }
    Ok(outcome(
        "groupoid-axioms",
        bad == 0,
        format!("{bad} violations; {checked} composable triples checked"),
    ))
}

fn check_orbit_partition(g: &Arc<FiniteGroupoid>) -> Result<PropertyOutcome> {
    let orbits = g.orbits();
    let mut seen: Vec<usize> = orbits.classes.iter().flatten().copied().collect();
    seen.sort_unstable();
    let mut ok = seen == g.units();
    for class in &orbits.classes {
        // Each pair inside a class must be connected, and the
        // representative is the least member.
        for &y in class {
            let connected = g
                .fibers(class[0])?
                .source_fiber
                .iter()
                .any(|&gamma| g.arrows()[gamma].range == y);
            ok &= connected || class[0] == y;
        }
    }
    ok &= orbits.representatives.iter().zip(&orbits.classes).all(|(r, c)| Some(r) == c.first());
    Ok(outcome(
        "orbit-partition",
        ok,
        format!("{} classes over {} units", orbits.classes.len(), g.units().len()),
    ))
}

fn check_isotropy_closure(g: &Arc<FiniteGroupoid>) -> Result<PropertyOutcome> {
    let mut bad = 0usize;
    for &x in g.units() {
        let iso = &g.fibers(x)?.isotropy;
        for &a in iso {
            if iso.binary_search(&g.inverse(a)?).is_err() {
                bad += 1;
            }
            for &b in iso {
                if iso.binary_search(&g.compose(a, b)?).is_err() {
                    bad += 1;
                }
            }
        }
    }
    Ok(outcome("isotropy-closure", bad == 0, format!("{bad} violations")))
}

fn check_convolution_associativity(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = random_element(g, rng);
        let h = random_element(g, rng);
        let k = random_element(g, rng);
        let left = f.convolve(&h)?.convolve(&k)?;
        let right = f.convolve(&h.convolve(&k)?)?;
        worst = worst.max(left.max_abs_diff(&right));
    }
    Ok(residual_outcome("convolution-associativity", worst, 1e-10, trials))
}

fn check_unit_identity(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let one = AlgebraElement::unit(g);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = random_element(g, rng);
        worst = worst.max(one.convolve(&f)?.max_abs_diff(&f));
        worst = worst.max(f.convolve(&one)?.max_abs_diff(&f));
    }
    Ok(residual_outcome("unit-identity", worst, 1e-12, trials))
}

fn check_adjoint_laws(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = random_element(g, rng);
        let h = random_element(g, rng);
        worst = worst.max(f.adjoint().adjoint().max_abs_diff(&f));
        let lhs = f.convolve(&h)?.adjoint();
        let rhs = h.adjoint().convolve(&f.adjoint())?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(residual_outcome("adjoint-laws", worst, 1e-12, trials))
}

fn check_fiber_entry_formula(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    // Independent route: column gamma1 of the fiber image is the
    // convolution f * delta_gamma1 restricted to the fiber.
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let f = random_element(g, rng);
        for &x in g.units() {
            let rep = regular_rep(&f, x)?;
            let fiber = g.fibers(x)?.source_fiber.clone();
            for (col, &g1) in fiber.iter().enumerate() {
                let column = f.convolve(&AlgebraElement::delta(g, g1)?)?;
                for (row, &g2) in fiber.iter().enumerate() {
                    let diff = (rep.matrix.get(row, col) - column.coeff(g2)).norm();
                    worst = worst.max(diff);
                }
            }
            cases += 1;
        }
    }
    Ok(residual_outcome("fiber-entry-formula", worst, 1e-13, cases))
}

fn check_fiber_star_homomorphism(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let f = random_element(g, rng);
        let h = random_element(g, rng);
        let product = f.convolve(&h)?;
        for &x in g.units() {
            let mf = regular_rep(&f, x)?.matrix;
            let mh = regular_rep(&h, x)?.matrix;
            let mp = regular_rep(&product, x)?.matrix;
            worst = worst.max(mp.sub(&mf.mul(&mh)).max_abs());
            let ma = regular_rep(&f.adjoint(), x)?.matrix;
            worst = worst.max(ma.sub(&mf.dagger()).max_abs());
            cases += 1;
        }
    }
    Ok(residual_outcome("fiber-star-homomorphism", worst, 1e-11, cases))
}

fn check_translation_unitaries(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    let samples: Vec<AlgebraElement> = (0..trials).map(|_| random_element(g, rng)).collect();
    for &x in g.units() {
        let iso = g.fibers(x)?.isotropy.clone();
        for &zeta in &iso {
            let r1 = translation_unitary(g, x, zeta)?;
            worst = worst.max(r1.unitary_defect());
            for &eta in &iso {
                let r2 = translation_unitary(g, x, eta)?;
                let direct = translation_unitary(g, x, g.compose(zeta, eta)?)?;
                worst = worst.max(r1.matrix.mul(&r2.matrix).sub(&direct.matrix).max_abs());
            }
            // Right translations commute with the left convolution action.
            for f in &samples {
                let lam = regular_rep(f, x)?.matrix;
                worst = worst.max(lam.mul(&r1.matrix).sub(&r1.matrix.mul(&lam)).max_abs());
            }
            cases += 1;
        }
    }
    Ok(residual_outcome("translation-unitaries", worst, 1e-12, cases))
}

fn check_orbit_intertwiners(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    let samples: Vec<AlgebraElement> = (0..trials).map(|_| random_element(g, rng)).collect();
    for class in &g.orbits().classes {
        let x = class[0];
        for &y in class.iter().skip(1) {
            let (v, _) = orbit_intertwiner(g, x, y)?.expect("same orbit");
            worst = worst.max(v.unitary_defect());
            for f in &samples {
                let lx = regular_rep(f, x)?.matrix;
                let ly = regular_rep(f, y)?.matrix;
                let conj = v.matrix.mul(&lx).mul(&v.matrix.dagger());
                worst = worst.max(conj.sub(&ly).max_abs());
            }
            cases += 1;
        }
    }
    Ok(residual_outcome("orbit-intertwiners", worst, 1e-12, cases))
}

fn check_pairing_positivity(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for t in 0..trials {
        let x = g.units()[t % g.units().len()];
        let phi = random_module_vector(g, x, rng)?;
        let pairing = module_inner(&phi, &phi)?;
        let at_unit = pairing.coeff(x);
        worst = worst.max((at_unit.re - phi.l2_norm().powi(2)).abs());
        worst = worst.max(at_unit.im.abs());
        let image = isotropy_regular(&pairing, x)?.matrix;
        let bottom = hermitian_eigenvalues(&image)?.first().copied().unwrap_or(0.0);
        worst = worst.max((-bottom).max(0.0));
        cases += 1;
    }
    Ok(residual_outcome("pairing-positivity", worst, 1e-10, cases))
}

fn check_module_norm_bound(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for t in 0..trials {
        let x = g.units()[t % g.units().len()];
        let phi = random_module_vector(g, x, rng)?;
        worst = worst.max(phi.l2_norm() - module_norm(&phi)?);
        cases += 1;
    }
    Ok(residual_outcome("module-norm-dominates-l2", worst.max(0.0), 1e-10, cases))
}

fn check_pairing_identity(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for t in 0..trials {
        let x = g.units()[t % g.units().len()];
        let f = random_element(g, rng);
        let phi = random_module_vector(g, x, rng)?;
        let psi = random_module_vector(g, x, rng)?;
        for &zeta in &g.fibers(x)?.isotropy {
            worst = worst.max(pairing_identity_residual(&f, &phi, &psi, zeta)?);
            cases += 1;
        }
    }
    Ok(residual_outcome("module-pairing-identity", worst, 1e-10, cases))
}

fn check_coefficient_bound(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    // Coefficients of an isotropy-supported element are dominated by the
    // norm of its image in the isotropy regular representation.
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for t in 0..trials {
        let x = g.units()[t % g.units().len()];
        let phi = random_module_vector(g, x, rng)?;
        let psi = random_module_vector(g, x, rng)?;
        let b = module_inner(&phi, &psi)?;
        let bound = spectral_norm(&isotropy_regular(&b, x)?.matrix)?;
        for &zeta in &g.fibers(x)?.isotropy {
            let value = coefficient_functional(&b, x, zeta)?.norm();
            worst = worst.max(value - bound);
            cases += 1;
        }
    }
    Ok(residual_outcome("coefficient-bound", worst.max(0.0), 1e-10, cases))
}

fn check_induced_unit_identity(g: &Arc<FiniteGroupoid>) -> Result<PropertyOutcome> {
    let one = AlgebraElement::unit(g);
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for &x in &g.orbits().representatives {
        for rep in isotropy_rep_menu(g, x)? {
            let space = InducedSpace::new(&rep)?;
            let m = space.represent(&one)?;
            worst = worst.max(m.sub(&ComplexMatrix::identity(m.rows())).max_abs());
            cases += 1;
        }
    }
    Ok(residual_outcome("induced-unit-identity", worst, 1e-10, cases))
}

fn check_induced_star_homomorphism(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for &x in &g.orbits().representatives {
        for rep in isotropy_rep_menu(g, x)? {
            let space = InducedSpace::new(&rep)?;
            for _ in 0..trials {
                let f = random_element(g, rng);
                let h = random_element(g, rng);
                let product = space.represent(&f.convolve(&h)?)?;
                let composed = space.represent(&f)?.mul(&space.represent(&h)?);
                worst = worst.max(product.sub(&composed).max_abs());
                let adj = space.represent(&f.adjoint())?;
                worst = worst.max(adj.sub(&space.represent(&f)?.dagger()).max_abs());
                cases += 1;
            }
        }
    }
    Ok(residual_outcome("induced-star-homomorphism", worst, 1e-9, cases))
}

fn check_induced_regular_equivalence(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for &x in &g.orbits().representatives {
        let (u, space) = induced_regular_unitary(g, x)?;
        worst = worst.max(u.unitary_defect());
        for _ in 0..trials {
            let f = random_element(g, rng);
            let induced = space.represent(&f)?;
            let pulled = u.matrix.dagger().mul(&induced).mul(&u.matrix);
            let lam = regular_rep(&f, x)?.matrix;
            worst = worst.max(pulled.sub(&lam).max_abs());
            cases += 1;
        }
    }
    Ok(residual_outcome("induced-regular-equivalence", worst, 1e-10, cases))
}

fn check_induced_vanishing(g: &Arc<FiniteGroupoid>) -> Result<PropertyOutcome> {
    let orbits = g.orbits();
    let mut checked = 0usize;
    let mut ok = true;
    for (i, &x) in orbits.representatives.iter().enumerate() {
        // An element supported away from the orbit of x is annihilated by
        // the fiber representation at x; induction must preserve that.
        let class = &orbits.classes[i];
        let off = AlgebraElement::from_fn(g, |gamma| {
            let unit = g.arrows()[gamma].source;
            if orbits.class_of(unit) == orbits.class_of(class[0]) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, -0.5)
            }
        });
        if off.support().is_empty() {
            continue;
        }
        ok &= spectral_norm(&regular_rep(&off, x)?.matrix)? <= 1e-12;
        ok &= induced_vanishing(g, x, &off)?;
        checked += 1;
    }
    let detail = if checked == 0 {
        "single orbit, vacuously true".to_string()
    } else {
        format!("{checked} off-orbit elements annihilated")
    };
    Ok(outcome("induced-vanishing", ok, detail))
}

fn check_cstar_identity(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let f = random_element(g, rng);
        let c = f.adjoint().convolve(&f)?;
        let norm_f = oracle_norm(&f)?;
        let norm_c = oracle_norm(&c)?;
        let scale = norm_f.powi(2).max(1.0);
        worst = worst.max((norm_c - norm_f.powi(2)).abs() / scale);
        cases += 1;
    }
    Ok(residual_outcome("cstar-identity", worst, 1e-9, cases))
}

fn check_norm_sufficiency(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut candidates = structured_elements(g);
    for _ in 0..trials {
        candidates.push(random_element(g, rng));
    }
    let mut worst: f64 = 0.0;
    let cases = candidates.len();
    for a in &candidates {
        let family = norm_profile(a, UnitScope::All)?;
        let scoped = norm_profile(a, UnitScope::OrbitReps)?;
        let reference = oracle_norm(a)?;
        let scale = reference.max(1.0);
        worst = worst.max((family.value - reference).abs() / scale);
        worst = worst.max((scoped.value - family.value).abs() / scale);
    }
    Ok(residual_outcome("family-norm-sufficiency", worst, 1e-9, cases))
}

fn check_norm_attainment(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    // Shifting a positive element by its norm produces a singular fiber
    // image exactly at a norm-attaining unit.
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let c = random_positive(g, rng);
        let profile = norm_profile(&c, UnitScope::All)?;
        let shifted = &c - &AlgebraElement::unit(g).scale(Complex64::new(profile.value, 0.0));
        let image = regular_rep(&shifted, profile.max_unit)?.matrix;
        let closest = hermitian_eigenvalues(&image)?
            .into_iter()
            .map(f64::abs)
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(closest / profile.value.max(1.0));
        cases += 1;
    }
    Ok(residual_outcome("norm-attainment-shift", worst, 1e-8, cases))
}

fn check_singularity_witness(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    // The witness unit must come within tolerance of the smallest fiber
    // singular value.
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let a = random_element(g, rng);
        let witness = singularity_witness(&a)?;
        let at_witness = min_singular_value(&regular_rep(&a, witness)?.matrix)?;
        let report = invertible_family(&a, 0.0, UnitScope::All)?;
        let scale = norm_profile(&a, UnitScope::All)?.value.max(1.0);
        worst = worst.max((at_witness - report.min_value) / scale);
        cases += 1;
    }
    Ok(residual_outcome("singularity-witness", worst.max(0.0), 1e-8, cases))
}

fn check_invertibility_consistency(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let tol = 1e-8;
    let mut candidates = structured_elements(g);
    for _ in 0..trials {
        candidates.push(random_element(g, rng));
    }
    let mut compared = 0usize;
    let mut skipped = 0usize;
    let mut disagreements = 0usize;
    for a in &candidates {
        let full = min_singular_value(&crate::rep::full_regular(a)?.matrix)?;
        // Near the threshold the two routes may legitimately round
        // opposite ways; only clear-margin cases are comparable.
        if (full - tol).abs() <= 10.0 * tol {
            skipped += 1;
            continue;
        }
        let family = invertible_family(a, tol, UnitScope::All)?;
        let oracle = invertible_oracle(a, tol)?;
        if family.invertible != oracle {
            disagreements += 1;
        }
        compared += 1;
    }
    Ok(outcome(
        "invertibility-consistency",
        disagreements == 0,
        format!("{disagreements} disagreements over {compared} cases ({skipped} near-threshold skipped)"),
    ))
}

fn check_spectrum_orbit_invariance(
    g: &Arc<FiniteGroupoid>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for _ in 0..trials {
        let a = random_self_adjoint(g, rng);
        let report = spectrum_report(&a, UnitScope::All)?;
        let scale = norm_profile(&a, UnitScope::All)?.value.max(1.0);
        for class in &g.orbits().classes {
            let base = &report.per_unit[&class[0]];
            for &y in class.iter().skip(1) {
                for (l, r) in base.iter().zip(&report.per_unit[&y]) {
                    worst = worst.max((l - r).abs() / scale);
                }
            }
        }
        // The block spectrum is the merged per-unit spectrum.
        let mut merged: Vec<f64> = report.per_unit.values().flatten().copied().collect();
        merged.sort_by(|p, q| p.partial_cmp(q).expect("finite eigenvalues"));
        for (m, f) in merged.iter().zip(&report.full) {
            worst = worst.max((m - f).abs() / scale);
        }
        cases += 1;
    }
    Ok(residual_outcome("spectrum-orbit-invariance", worst, 1e-9, cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_groupoid, GroupoidSpec};

    #[test]
    fn suite_passes_on_a_two_orbit_groupoid() {
        let g = build_groupoid(&GroupoidSpec::Union(vec![
            GroupoidSpec::Pair(2),
            GroupoidSpec::Group {
                table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            },
        ]))
        .unwrap();
        let report = verify_suite(&g, 40, 11).unwrap();
        for o in &report.outcomes {
            assert!(o.passed, "{} failed: {}", o.name, o.detail);
        }
        assert!(report.passed);
        assert_eq!(report.orbits, 2);
    }

    #[test]
    fn suite_is_deterministic_in_the_seed() {
        let g = FiniteGroupoid::cyclic_group(4).unwrap();
        let one = verify_suite(&g, 25, 3).unwrap();
        let two = verify_suite(&g, 25, 3).unwrap();
        assert_eq!(one.to_string(), two.to_string());
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&two).unwrap()
        );
        let other = verify_suite(&g, 25, 4).unwrap();
        assert_eq!(one.outcomes.len(), other.outcomes.len());
    }
}
