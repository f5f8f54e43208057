use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum CapError {
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("operation out of its exponent regime: {0}")]
    RegimeMismatch(String),

    #[error("quadrature failed to converge (estimate {estimate}, error {error}, target {target})")]
    QuadratureFailed {
        estimate: f64,
        error: f64,
        target: f64,
    },

    #[error("solver did not converge: {0}")]
    SolveFailed(String),

    #[error("root not bracketed: {0}")]
    BracketFailed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported domain/operation combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CapError>;
