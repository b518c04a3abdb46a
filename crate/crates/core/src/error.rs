use thiserror::Error;

/// Failure modes shared by all modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series, quadrature or contour rule failed to converge or hit a singularity.
    #[error("evaluation failed in {what}: {detail}")]
    Evaluation { what: &'static str, detail: String },
    /// A root or crossing does not exist within the search horizon.
    #[error("{what} not found: {reason}")]
    NotFound { what: &'static str, reason: String },
    /// A quantity needed as a divisor or a finite index set is degenerate.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// Invalid configuration of a numerical procedure.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn eval(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Evaluation { what, detail: detail.into() }
    }

    pub(crate) fn not_found(what: &'static str, reason: impl Into<String>) -> Self {
        Error::NotFound { what, reason: reason.into() }
    }
}
