use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element {value} lies outside [0, u]: {reason}")]
    OutOfInterval { value: String, reason: String },

    #[error("partial operation undefined: {0}")]
    UndefinedPartialOp(String),

    #[error("undefined decorated symbol: {0}")]
    UndefinedSymbol(String),

    #[error("empty difference interval: {lo} > {hi}")]
    ReversedInterval { lo: String, hi: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("not a valid spectral resolution: {0}")]
    InvalidResolution(String),

    #[error("characteristic point: {0}")]
    CharacteristicPoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("region is not atom-aligned: {0}")]
    RegionNotAligned(String),

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
