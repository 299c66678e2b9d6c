use thiserror::Error;

/// Errors raised by the series, Fock and Frobenius layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("constant term is not 1, cannot invert")]
    NonUnitConstantTerm,

    #[error("trust exceeded: {0}")]
    TrustExceeded(String),

    #[error("flat coordinate map has a singular Jacobian at the base point")]
    NonInvertibleFlatMap,

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("twist violation at level {level}")]
    NotTwisted { level: u32 },

    #[error("verification failed in {check}: first nonzero monomial {monomial}")]
    VerificationFailed { check: String, monomial: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
