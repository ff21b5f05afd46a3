use thiserror::Error;

/// Errors raised by state construction, gate application and the algorithms
/// built on top of them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={cap}")]
    Size { requested: usize, cap: usize },

    #[error("index {index} out of range for {what} of size {size}")]
    Bounds {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("qubit {0} used more than once in a single gate")]
    DuplicateQubit(usize),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("numerical failure at site {site}: {reason}")]
    Numerical { site: usize, reason: String },

    #[error("unsupported on this backend: {0}")]
    Capability(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("optimizer received a non-finite gradient component at index {index}")]
    NonFiniteGradient { index: usize },

    #[error("non-finite energy at {stage} {index}")]
    NonFiniteEnergy { stage: &'static str, index: usize },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
