use thiserror::Error;

/// Errors raised by the statistical kernel and the analyses built on it.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine failed to converge. Never silently returns a
    /// wrong answer.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The block design violates a structural invariant (dimensions,
    /// labels, non-finite cells, missing cells).
    #[error("invalid design: {0}")]
    InvalidDesign(String),

    /// The data admit no meaningful answer (e.g. zero rank variance).
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}
