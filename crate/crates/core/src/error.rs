use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is below the minimum of 3")]
    DimensionTooSmall(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("linear part does not preserve the Minkowski form (residual {residual:.3e})")]
    NotLorentz { residual: f64 },
    #[error("linear part reverses the time orientation")]
    TimeReversing,
    #[error("linear part reverses the orientation")]
    OrientationReversing,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unbounded problem: {0}")]
    Unbounded(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for failures of an algorithm on valid input, false for rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Unbounded(_) | Error::LimitExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
