use thiserror::Error;

/// Errors raised by the geometry kernel and the checks built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("infeasible triangle: sides ({a}, {b}, {c}) violate the model triangle inequality")]
    InfeasibleTriangle { a: f64, b: f64, c: f64 },
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("step violation: {0}")]
    StepViolation(String),
    #[error("expansion domain violation: {0}")]
    ExpansionDomain(String),
    #[error("insufficient range: {0}")]
    InsufficientRange(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Fails with `InvalidArgument` unless `cond` holds.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
