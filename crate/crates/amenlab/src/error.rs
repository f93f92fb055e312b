use thiserror::Error;

/// Errors raised by the library. Cap violations are kept separate from
/// validation failures so front ends can map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown group or G-set spec `{0}`")]
    UnknownSpec(String),
    #[error("generator index {index} out of range for a group with {rank} generators")]
    UnknownGenerator { index: usize, rank: usize },
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("letter `{letter}` is not in the alphabet {{0,1}}")]
    WrongAlphabet { letter: char },
    #[error("operation requires the {expected} family, got {got}")]
    WrongFamily { expected: String, got: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} cap exceeded (limit {limit}, reached {reached})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        reached: usize,
    },
    #[error("vertex `{0}` lies on the frontier of the ball")]
    Frontier(String),
    #[error("no interior vertices in the ball")]
    NoInterior,
    #[error("measure is not symmetric")]
    NotSymmetric,
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("rule has no quiescent state")]
    NoQuiescent,
    #[error("cylinder unresolved: {0}")]
    Unresolved(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
