use thiserror::Error;

/// Errors shared across the crate.
///
/// Witness-bearing failures (non-integral coefficients, non-cyclotomic
/// factors, non-torsion elements) carry enough data to re-verify the
/// failure with a single follow-up call.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("polynomial {poly} is reducible over F_{p}")]
    ReducibleModulus { poly: String, p: u64 },

    #[error("singular matrix")]
    SingularMatrix,

    /// A characteristic-polynomial coefficient outside the integral closure
    /// of the prime ring; this error doubles as the certification witness.
    #[error("coefficient at index {index} is not integral: {value}")]
    NonIntegralCoefficient { index: usize, value: String },

    #[error("matrix is not torsion: {0}")]
    NotTorsion(String),

    /// The unit-circle failure: a factor that is not cyclotomic remains.
    #[error("polynomial has a non-cyclotomic factor: {0}")]
    NotUnitCircle(String),

    #[error("multiplicative order of zero is undefined")]
    ZeroElement,

    #[error("degree {degree} outside supported range {min}..={max}")]
    DegreeOutOfRange {
        degree: usize,
        min: usize,
        max: usize,
    },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generator {index} rotates vertex types: nu_det = {nu_det} is nonzero mod {dim}")]
    TypeRotating {
        index: usize,
        nu_det: i64,
        dim: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
