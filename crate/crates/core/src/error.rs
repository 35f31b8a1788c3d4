use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("truncation instability: results differ between r={r} and r={r2}")]
    TruncationUnstable { r: usize, r2: usize },
    #[error("word is not ordered: {0:?}")]
    NotOrdered(Vec<i64>),
    #[error("shared sector label {0} in xi")]
    SharedSector(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unitriangularity violated: {0}")]
    NotUnitriangular(String),
    #[error("use the primed operator for the last sector")]
    LastSector,
}

pub type Result<T> = std::result::Result<T, Error>;
