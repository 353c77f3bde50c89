use thiserror::Error;

/// Errors raised by the discord library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid two-orbital density matrix: {0}")]
    InvalidRdm(String),

    #[error("invalid density set: {0}")]
    InvalidDensities(String),

    #[error("orbital indices ({0}, {1}) are invalid for {2} orbitals")]
    InvalidPair(usize, usize, usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("transformation is not canonical (violation {0:e})")]
    NotCanonical(f64),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
