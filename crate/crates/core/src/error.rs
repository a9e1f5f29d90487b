use thiserror::Error;

/// Errors raised by the engine. Variants carry enough context to say which
/// precondition failed; numeric values are included where they help.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("damping {nu} outside admissible strip ({lo}, {hi})")]
    StripViolation { nu: f64, lo: f64, hi: f64 },

    #[error("admissible damping strip is empty: {0}")]
    EmptyStrip(String),

    #[error("numerical overflow: {0}")]
    NumericalOverflow(String),

    #[error("quadratic roots coincide (|y1 - y2| = {0:e})")]
    DegenerateRoots(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("length {0} is not a power of two")]
    NonPowerOfTwo(usize),

    #[error("grid constraint violated: {0}")]
    GridConstraintViolation(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("maximum iterations ({0}) exceeded")]
    MaxIterations(usize),

    #[error("loss distribution is not continuous; two-step algorithm does not apply")]
    DiscontinuousCdf,

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("simulation budget exceeded: {0}")]
    SimulationBudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
