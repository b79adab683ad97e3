use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid logic: {0}")]
    Logic(String),
    #[error("node budget of {0} nodes exceeded")]
    ResourceLimit(usize),
    #[error("engine inconsistency: {0}")]
    Inconsistency(String),
    #[error("model extraction failed: {0}")]
    Extraction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
