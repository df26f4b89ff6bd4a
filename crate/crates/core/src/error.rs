use thiserror::Error;

/// Errors raised before any numerical work starts.
///
/// Quadrature that runs out of subdivisions is not an error: it comes back as an
/// [`IntegralEstimate`](crate::quad::IntegralEstimate) with `converged == false`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
