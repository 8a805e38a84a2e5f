use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: at least 2 elements are required, got {0}")]
    InvalidMesh(usize),
    #[error("invalid mesh nodes: {0}")]
    InvalidNodes(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("interior index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },
    #[error("partition mismatch: expected N = {expected}, found N = {found}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("training diverged at iteration {iteration} (non-finite parameters or cost)")]
    Divergence { iteration: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
