use thiserror::Error;

use crate::fan::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cone generators are not a unimodular basis (|det| = {det})")]
    NonUnimodular { det: String },
    #[error("cone generators are linearly dependent")]
    DependentGenerators,
    #[error("ray index {index} out of range (fan has {rays} rays)")]
    IndexOutOfRange { index: usize, rays: usize },
    #[error("vector length {found} does not match lattice rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("could not locate a cone containing the sum of primitive set {0}")]
    LocateFailure(String),
    #[error("{0} is not a cone of the fan")]
    NotACone(String),
    #[error("{0} is not a primitive set of the fan")]
    NotAPrimitiveSet(String),
    #[error("fan failed validation: {0}")]
    InvalidFan(ValidationReport),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("curve class {0} is not in H_2 (its pairings do not sum rays to zero)")]
    InvalidCurveClass(String),
    #[error("curve class {0} is not effective")]
    NotEffective(String),
    #[error("effectivity of {0} cannot be decided: some primitive class has nonpositive anticanonical degree")]
    EffectivityUndecided(String),
    #[error("fan is not Fano")]
    NotFano,
    #[error("fan is not in the required class (tier {found}, need {required})")]
    NotInClass { found: String, required: String },
    #[error("no primitive exceptional relation has right-hand side ray {0}")]
    NoExceptionalRelation(usize),
    #[error("blow-down produced an invalid fan: {0}")]
    BlowDownInvalid(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cohomology normal form failed: {0}")]
    Cohomology(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
