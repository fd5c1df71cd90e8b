use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A mathematical precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or quadrature budget was exhausted.
    #[error("resource limit exceeded: {what} (bound used: {bound})")]
    Resource { what: String, bound: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("interpolation check failed: origin value zero")]
    OriginValueZero,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
