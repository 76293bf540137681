use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A single violated parameter condition, reported by `validate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.condition, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported division algebra dimension {0}; expected 1, 2 or 4")]
    InvalidAlgebra(u32),

    #[error("operation requires the quaternion algebra")]
    WrongAlgebra,

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not self-adjoint (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidParams(Vec<Violation>),

    #[error("partition degree {degree} exceeds the Jack table limit {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("generalized Pochhammer denominator vanishes at partition {0}")]
    PochhammerZero(String),

    #[error("sampling is only available for the type I family")]
    UnsupportedVariant,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64 },

    #[error("quadrature grid of {0} nodes exceeds the supported size")]
    GridTooLarge(u64),
}
