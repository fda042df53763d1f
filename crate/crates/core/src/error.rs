use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value encountered: {0}")]
    Numeric(String),

    #[error("eigenvalue iteration did not converge for a {dim}x{dim} matrix")]
    Convergence { dim: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("dominant eigenvalue vanishes (|lambda0| = {0:e}); nothing to extract")]
    EmptyExtraction(f64),

    #[error("initial state has no component along the dominant eigenprojection")]
    OrthogonalStart,

    #[error("spectrum is degenerate: {0}")]
    Degenerate(String),

    #[error("outside the formula's domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
