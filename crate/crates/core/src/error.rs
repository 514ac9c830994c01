use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A probability vector failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// The entropy index is not supported by the requested quantity.
    #[error("unsupported entropy index: {0}")]
    UnsupportedIndex(String),
    /// The entropy is constant over the state family, so it cannot be normalized.
    #[error("degenerate state family: entropy range is {0:e}")]
    DegenerateFamily(f64),
    /// A numerical search produced a result that violates its own invariants.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
