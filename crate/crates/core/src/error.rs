use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("dimension {requested} exceeds the cap of {cap}")]
    DimensionLimit { requested: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving (completeness residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
