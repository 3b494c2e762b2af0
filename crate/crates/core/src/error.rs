use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown Cartan type {0:?}")]
    UnknownType(String),
    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("window must be at least 1, got {0}")]
    InvalidWindow(i64),
    #[error("basis element {0} is outside the window or selector")]
    OutOfWindow(String),
    #[error("window {window} too small for degree {degree}")]
    WindowTooSmall { window: i64, degree: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
