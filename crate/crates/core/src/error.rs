use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singularity: {0}")]
    Singularity(String),

    /// The optimal-attack bracket `(m f + X)/(1 + X m f) - 1` is not strictly positive.
    #[error("degenerate regime: attack-noise bracket is {bracket} (must be > 0)")]
    DegenerateRegime { bracket: f64 },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient trials: {0}")]
    InsufficientTrials(String),

    /// Monte Carlo configuration whose analytic probability is too small to sample.
    #[error("refused configuration: {0}")]
    Refused(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {value}")))
    }
}
