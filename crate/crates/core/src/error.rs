use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value does not fit in binary64: {0}")]
    Overflow(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("interpolation nodes are not pairwise distinct (nodes {0} and {1})")]
    DuplicateNodes(usize, usize),
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("root finder did not converge after {iterations} iterations (max step {max_step:e})")]
    NoConvergence {
        iterations: usize,
        max_step: f64,
        best: Vec<num_complex::Complex64>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level {rho} is too close to the critical level {critical}")]
    NearCriticalLevel { rho: f64, critical: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("representations do not share basis and order")]
    IncompatibleRepresentations,
    #[error("non-finite intermediate value during evaluation")]
    NonFinite,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
