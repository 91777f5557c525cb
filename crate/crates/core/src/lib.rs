//! Finite groupoid convolution algebras, materialized.
//!
//! A finite groupoid is a set of arrows with a partial composition whose
//! every arrow is invertible; its complex-valued functions form a
//! *-algebra under convolution. This crate builds such groupoids from
//! descriptions (pair groupoids, groups, group actions, disjoint unions,
//! explicit tables), validates every axiom exhaustively, and realizes the
//! algebra as concrete complex matrices:
//!
//! - [`rep`]: the fiber representation at each unit, its block-diagonal
//!   sum over all units, translation unitaries, and the intertwiners that
//!   identify fibers along an orbit;
//! - [`induction`]: the Hilbert-module pairing over isotropy group
//!   algebras and representations induced from unitary isotropy
//!   representations, including the unitary that identifies the fiber
//!   representation with the one induced from the left regular isotropy
//!   representation;
//! - [`analysis`]: norms, spectra, invertibility verdicts, and the
//!   shift-based witness constructions that tie norm attainment to
//!   singularity, all cross-checkable against the faithful block
//!   representation — plus a seeded self-check suite over all of it;
//! - [`spectral`]: the dense complex matrix kernel (Jacobi
//!   eigendecomposition, operator norms, inversion) everything rests on.
//!
//! Everything is exact-arithmetic-friendly: structures are integer tables,
//! matrices are explicit, and all randomized checks are reproducible from
//! a seed.

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod format;
pub mod groupoid;
pub mod induction;
pub mod rep;
pub mod sampling;
pub mod spectral;

pub use algebra::AlgebraElement;
/// Coefficient scalar used throughout; re-exported so callers can build
/// coefficient vectors without naming the numerics crate themselves.
pub use num_complex::Complex64;
pub use analysis::verify::{verify_suite, PropertyOutcome, VerifyReport};
pub use analysis::{
    invertible_family, invertible_oracle, norm_profile, oracle_norm, singularity_witness,
    spectrum_report, InvertibilityReport, NormProfile, SpectrumReport, UnitScope,
};
pub use error::{Error, Result};
pub use format::{
    load_element, load_groupoid, parse_element, parse_groupoid, serialize_element,
    serialize_groupoid,
};
pub use groupoid::{
    build_groupoid, Arrow, Fibers, FiniteGroupoid, GroupoidSpec, OrbitDecomposition,
};
pub use induction::{
    coefficient_functional, induce, induced_regular_unitary, induced_vanishing, module_inner,
    module_norm, pairing_identity_residual, InducedSpace, IsotropyRep, ModuleVector,
};
pub use rep::{
    full_regular, isotropy_regular, orbit_intertwiner, regular_rep, translation_unitary,
    BasisLabel, MatrixRep,
};
pub use spectral::{
    hermitian_eigen, hermitian_eigenvalues, invert, min_singular_value, spectral_norm,
    ComplexMatrix,
};
