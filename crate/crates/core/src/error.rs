use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument (or a contiguous sum of arguments) is too close to a pole.
    #[error("argument {value:e} is within {threshold:e} of a singular point")]
    NearSingular { value: f64, threshold: f64 },

    #[error("argument {0} exceeds the magnitude cap")]
    Overflow(f64),

    #[error("permutation arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (eigenvalue {0:e})")]
    NonSpd(f64),

    #[error("degenerate spectrum: gap {gap:e} below {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("ambiguous eigenvector matching: best overlap {0:.4}")]
    AmbiguousMatching(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
