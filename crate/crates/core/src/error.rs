use thiserror::Error;

/// Errors raised by the geometry, order and distance routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {coords:?} lies outside the chart domain of {model}")]
    Domain { model: &'static str, coords: Vec<f64> },
    #[error("unsupported operation: {0}")]
    Capability(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("estimation error: {0}")]
    Estimation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
