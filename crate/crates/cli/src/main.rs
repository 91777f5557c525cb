//! Command-line frontend for the groupoidal library.
//!
//! Loads groupoid and element files, runs the analysis routines, and prints
//! either a human-readable report or `--json` structured output.  Exit codes
//! are scriptable: 0 success/pass, 1 parse or validation error, 2 property
//! failure, 3 singular verdict from `invert`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use groupoidal::sampling::{random_element, random_module_vector};
use groupoidal::{
    induced_regular_unitary, invertible_family, load_element, load_groupoid, module_inner,
    module_norm, norm_profile, pairing_identity_residual, regular_rep, spectral_norm,
    spectrum_report, verify_suite, AlgebraElement, Error, FiniteGroupoid, ModuleVector, Result,
    UnitScope,
};

#[derive(Parser)]
#[command(name = "groupoidal", version, about = "Finite groupoid convolution algebras: norms, spectra, invertibility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid axioms on a file and report the structure sizes.
    Validate {
        groupoid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print units, arrows, orbits, and isotropy group orders.
    Info {
        groupoid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Two-column `unit value` listing of the per-unit fiber norms.
    Profile {
        groupoid: PathBuf,
        element: PathBuf,
        /// Evaluate one unit per orbit instead of all units.
        #[arg(long)]
        orbit_reps: bool,
        #[arg(long)]
        json: bool,
    },
    /// Largest fiber norm over the units, with the attaining unit.
    Norm {
        groupoid: PathBuf,
        element: PathBuf,
        #[arg(long)]
        orbit_reps: bool,
        #[arg(long)]
        json: bool,
    },
    /// Eigenvalues of the fiber images of a self-adjoint element.
    Spectrum {
        groupoid: PathBuf,
        element: PathBuf,
        #[arg(long)]
        orbit_reps: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide invertibility from the per-unit fiber norms; exit 3 if singular.
    Invert {
        groupoid: PathBuf,
        element: PathBuf,
        /// Smallest singular value treated as nonzero.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        orbit_reps: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exercise the module pairing and induction identities on random data.
    InduceCheck {
        groupoid: PathBuf,
        /// Random samples per unit for each check.
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the full property suite against this groupoid.
    Verify {
        groupoid: PathBuf,
        /// Random samples per property.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // Restore the default SIGPIPE disposition so `groupoidal … | head`
    // dies quietly like other Unix tools instead of panicking when the
    // reader closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // Exit 2 is reserved for property failures, so usage errors are mapped
    // onto 1 alongside file parse errors.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if benign { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn scope(orbit_reps: bool) -> UnitScope {
    if orbit_reps {
        UnitScope::OrbitReps
    } else {
        UnitScope::All
    }
}

/// Load a groupoid and an element and insist they agree.  The element file
/// names its own groupoid; we keep the command-line one authoritative but
/// refuse to proceed unless the two are structurally identical.
fn load_pair(gpath: &Path, epath: &Path) -> Result<(Arc<FiniteGroupoid>, AlgebraElement)> {
    let g = load_groupoid(gpath)?;
    let declared = load_element(epath)?;
    if !declared.groupoid().structural_eq(&g) {
        return Err(Error::MalformedSpec(format!(
            "element file {} declares a groupoid that does not match {} ({} arrows, {} units)",
            epath.display(),
            gpath.display(),
            g.arrow_count(),
            g.units().len(),
        )));
    }
    let a = AlgebraElement::from_coeffs(&g, declared.coeffs().to_vec())?;
    Ok((g, a))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize to JSON")
}

fn join_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct SizeReport {
    valid: bool,
    arrows: usize,
    units: usize,
    orbits: usize,
}

#[derive(Serialize)]
struct OrbitInfo {
    representative: usize,
    units: Vec<usize>,
    isotropy_order: usize,
}

#[derive(Serialize)]
struct InfoReport {
    arrows: usize,
    units: Vec<usize>,
    orbits: Vec<OrbitInfo>,
}

#[derive(Serialize)]
struct CheckLine {
    name: &'static str,
    cases: usize,
    max_residual: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct InduceReport {
    trials: usize,
    seed: u64,
    passed: bool,
    checks: Vec<CheckLine>,
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { groupoid, json } => {
            let g = load_groupoid(&groupoid)?;
            let report = SizeReport {
                valid: true,
                arrows: g.arrow_count(),
                units: g.units().len(),
                orbits: g.orbits().classes.len(),
            };
            if json {
                println!("{}", to_json(&report));
            } else {
                println!(
                    "groupoid ok: {} arrows, {} units, {} orbits",
                    report.arrows, report.units, report.orbits
                );
            }
            Ok(0)
        }
        Command::Info { groupoid, json } => {
            let g = load_groupoid(&groupoid)?;
            let orbits = g.orbits();
            let mut infos = Vec::new();
            for (class, &rep) in orbits.classes.iter().zip(&orbits.representatives) {
                infos.push(OrbitInfo {
                    representative: rep,
                    units: class.clone(),
                    isotropy_order: g.fibers(rep)?.isotropy.len(),
                });
            }
            let report = InfoReport {
                arrows: g.arrow_count(),
                units: g.units().to_vec(),
                orbits: infos,
            };
            if json {
                println!("{}", to_json(&report));
            } else {
                println!("arrows {}", report.arrows);
                let units = report
                    .units
                    .iter()
                    .map(|u| u.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                println!("units {}: {units}", report.units.len());
                println!("orbits {}", report.orbits.len());
                for (i, o) in report.orbits.iter().enumerate() {
                    let members = o
                        .units
                        .iter()
                        .map(|u| u.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!(
                        "orbit {i}: units {members}, isotropy order {}",
                        o.isotropy_order
                    );
                }
            }
            Ok(0)
        }
        Command::Profile {
            groupoid,
            element,
            orbit_reps,
            json,
        } => {
            let (_, a) = load_pair(&groupoid, &element)?;
            let profile = norm_profile(&a, scope(orbit_reps))?;
            if json {
                println!("{}", to_json(&profile));
            } else {
                for (unit, value) in &profile.per_unit {
                    println!("{unit} {value:.6}");
                }
            }
            Ok(0)
        }
        Command::Norm {
            groupoid,
            element,
            orbit_reps,
            json,
        } => {
            let (_, a) = load_pair(&groupoid, &element)?;
            let profile = norm_profile(&a, scope(orbit_reps))?;
            if json {
                println!("{}", to_json(&profile));
            } else {
                for (unit, value) in &profile.per_unit {
                    println!("{unit} {value:.6}");
                }
                println!("max {:.6} at unit {}", profile.value, profile.max_unit);
            }
            Ok(0)
        }
        Command::Spectrum {
            groupoid,
            element,
            orbit_reps,
            json,
        } => {
            let (_, a) = load_pair(&groupoid, &element)?;
            let defect = a.self_adjoint_defect();
            if defect > 1e-10 {
                eprintln!(
                    "error: element is not self-adjoint (defect {defect:.3e}); \
                     spectrum requires a = a*"
                );
                return Ok(1);
            }
            let report = spectrum_report(&a, scope(orbit_reps))?;
            if json {
                println!("{}", to_json(&report));
            } else {
                for (unit, values) in &report.per_unit {
                    println!("unit {unit}: {}", join_values(values));
                }
                println!("full: {}", join_values(&report.full));
            }
            Ok(0)
        }
        Command::Invert {
            groupoid,
            element,
            tol,
            orbit_reps,
            json,
        } => {
            let (_, a) = load_pair(&groupoid, &element)?;
            let report = invertible_family(&a, tol, scope(orbit_reps))?;
            if json {
                println!("{}", to_json(&report));
            } else if report.invertible {
                println!(
                    "invertible, min σ = {:.6} (attained at unit {})",
                    report.min_value, report.min_unit
                );
            } else {
                println!(
                    "singular: min σ = {:.6} at unit {} (tol {:.1e})",
                    report.min_value, report.min_unit, report.tol
                );
                println!("witness unit {}", report.witness.unwrap_or(report.min_unit));
            }
            Ok(if report.invertible { 0 } else { 3 })
        }
        Command::InduceCheck {
            groupoid,
            trials,
            seed,
            json,
        } => {
            let g = load_groupoid(&groupoid)?;
            let report = induce_check(&g, trials, seed)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                println!(
                    "checking module and induction identities on {} units (trials {}, seed {})",
                    g.units().len(),
                    report.trials,
                    report.seed
                );
                for c in &report.checks {
                    let verdict = if c.passed { "pass" } else { "FAIL" };
                    println!(
                        "{verdict} {:<30} max residual {:.3e} over {} cases (tolerance {:.1e})",
                        c.name, c.max_residual, c.cases, c.tolerance
                    );
                }
                let passed = report.checks.iter().filter(|c| c.passed).count();
                println!(
                    "result: {} ({passed}/{} checks)",
                    if report.passed { "PASS" } else { "FAIL" },
                    report.checks.len()
                );
            }
            Ok(if report.passed { 0 } else { 2 })
        }
        Command::Verify {
            groupoid,
            trials,
            seed,
            json,
        } => {
            let g = load_groupoid(&groupoid)?;
            let report = verify_suite(&g, trials, seed)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                println!("{report}");
            }
            Ok(if report.passed { 0 } else { 2 })
        }
    }
}

/// The four module/induction identities on seeded random data: basis-pair
/// inner products, the induced-vs-regular equivalence, the embedding norm
/// bound, and the module pairing identity.
fn induce_check(g: &Arc<FiniteGroupoid>, trials: usize, seed: u64) -> Result<InduceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Basis pairings are exact: <e_g1, e_g2> is a delta or zero.
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &x in g.units() {
        let fiber = &g.fibers(x)?.source_fiber;
        for &g1 in fiber {
            for &g2 in fiber {
                let e1 = ModuleVector::basis_vector(g, x, g1)?;
                let e2 = ModuleVector::basis_vector(g, x, g2)?;
                let got = module_inner(&e1, &e2)?;
                let expected = if g.range(g1)? == g.range(g2)? {
                    AlgebraElement::delta(g, g.compose(g.inverse(g1)?, g2)?)?
                } else {
                    AlgebraElement::zero(g)
                };
                worst = worst.max(got.max_abs_diff(&expected));
                cases += 1;
            }
        }
    }
    checks.push(CheckLine {
        name: "basis-pair inner products",
        cases,
        max_residual: worst,
        tolerance: 1e-12,
        passed: worst <= 1e-12,
    });

    // Conjugating the induced left-regular representation by the canonical
    // unitary must reproduce the fiber representation.
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &x in g.units() {
        let (u_rep, space) = induced_regular_unitary(g, x)?;
        let u = &u_rep.matrix;
        let udag = u.dagger();
        for _ in 0..trials {
            let f = random_element(g, &mut rng);
            let induced = space.represent(&f)?;
            let fiber_image = regular_rep(&f, x)?;
            let residual = spectral_norm(&udag.mul(&induced).mul(u).sub(&fiber_image.matrix))?;
            worst = worst.max(residual);
            cases += 1;
        }
    }
    checks.push(CheckLine {
        name: "induced-vs-regular equivalence",
        cases,
        max_residual: worst,
        tolerance: 1e-10,
        passed: worst <= 1e-10,
    });

    // The coordinate embedding is norm-decreasing: l2 never exceeds the
    // module norm.
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &x in g.units() {
        for _ in 0..trials {
            let phi = random_module_vector(g, x, &mut rng)?;
            let gap = phi.l2_norm() - module_norm(&phi)?;
            worst = worst.max(gap.max(0.0));
            cases += 1;
        }
    }
    checks.push(CheckLine {
        name: "embedding norm bound",
        cases,
        max_residual: worst,
        tolerance: 1e-10,
        passed: worst <= 1e-10,
    });

    // <phi, f.psi> evaluated anywhere on the isotropy group agrees with the
    // matrix-side expression.
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &x in g.units() {
        let isotropy = g.fibers(x)?.isotropy.clone();
        for _ in 0..trials {
            let f = random_element(g, &mut rng);
            let phi = random_module_vector(g, x, &mut rng)?;
            let psi = random_module_vector(g, x, &mut rng)?;
            for &zeta in &isotropy {
                worst = worst.max(pairing_identity_residual(&f, &phi, &psi, zeta)?);
                cases += 1;
            }
        }
    }
    checks.push(CheckLine {
        name: "module pairing identity",
        cases,
        max_residual: worst,
        tolerance: 1e-10,
        passed: worst <= 1e-10,
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(InduceReport {
        trials,
        seed,
        passed,
        checks,
    })
}
