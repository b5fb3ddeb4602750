use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not symplectic (relative residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("index {index} out of range for rank {n}")]
    Index { index: usize, n: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("subspaces are not transverse")]
    NotTransverse,
    #[error("element is not proximal (top-n eigenvalue modulus {0:.6})")]
    NotProximal(f64),
    #[error("element is not hyperbolic (trace {0:.6})")]
    NotHyperbolic(f64),
    #[error("rank n = {0} is not supported here")]
    UnsupportedRank(usize),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
