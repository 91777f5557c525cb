use thiserror::Error;

/// Errors shared across the crate.
///
/// Structural errors carry the offending arrow ids so callers can point at
/// the exact table entry that broke a law.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A groupoid axiom failed during exhaustive validation.
    #[error("axiom violation: {law} (arrows {arrows:?})")]
    AxiomViolation { law: String, arrows: Vec<usize> },

    /// A constructor description is self-inconsistent (bad table sizes,
    /// duplicate ids, missing identity, non-permutation action, ...).
    #[error("malformed groupoid description: {0}")]
    MalformedSpec(String),

    /// Requested product of a non-composable pair.
    #[error("undefined composition: source of arrow {first} is not the range of arrow {second}")]
    UndefinedComposition { first: usize, second: usize },

    /// A unit id was expected.
    #[error("arrow {0} is not a unit")]
    NotAUnit(usize),

    /// An arrow id outside 0..arrow_count.
    #[error("unknown arrow id {0}")]
    UnknownArrow(usize),

    /// Two operands live over different groupoids.
    #[error("operands belong to different groupoids")]
    GroupoidMismatch,

    /// An arrow lies outside the fiber a module vector is based on.
    #[error("arrow {arrow} is not in the fiber of unit {unit}")]
    NotInFiber { arrow: usize, unit: usize },

    /// Hermitian input expected; `deviation` is the max entrywise distance
    /// from the conjugate transpose.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// The eigensolver ran out of sweeps before the off-diagonal mass fell
    /// under the convergence threshold.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// Matrix inversion hit a zero pivot.
    #[error("matrix is numerically singular")]
    SingularMatrix,

    /// A coefficient vector meant to live on an isotropy group has support
    /// elsewhere.
    #[error("support outside the isotropy group (arrow {arrow})")]
    SupportOutsideIsotropy { arrow: usize },

    /// An evaluation point that must lie in the isotropy group does not.
    #[error("arrow {arrow} is not in the isotropy group at unit {unit}")]
    NotInIsotropy { arrow: usize, unit: usize },

    /// Module vectors based at different units.
    #[error("module vectors are based at different units ({left} vs {right})")]
    BaseUnitMismatch { left: usize, right: usize },

    /// An isotropy representation failed validation (not multiplicative,
    /// not unitary, wrong identity image, ...).
    #[error("invalid isotropy representation: {0}")]
    InvalidRep(String),

    /// A text-format file failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Filesystem trouble while resolving groupoid or element files.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
