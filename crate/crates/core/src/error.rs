use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported limit: {0}")]
    UnsupportedLimit(String),

    #[error("kernel is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
