use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {field}: {msg}")]
    Parse { field: String, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
