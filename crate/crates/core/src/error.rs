use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments or indices supplied by the caller.
    #[error("input error: {0}")]
    Input(String),
    /// Edge lengths that do not define a valid discrete metric.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    /// Mesh lacks a required combinatorial structure (manifoldness, product bands, ...).
    #[error("structural error: {0}")]
    Structure(String),
    /// No region attains the requested volume within tolerance.
    #[error("infeasible volume target: {0}")]
    Infeasible(String),
    /// Instance exceeds a configured hard cap.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed mesh/config/cycle files.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn metric(msg: impl Into<String>) -> Self {
        Error::InvalidMetric(msg.into())
    }
    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
