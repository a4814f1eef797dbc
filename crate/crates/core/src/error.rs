use thiserror::Error;

/// Errors raised by the transform, convolution and Boehmian routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LctError {
    /// `ad - bc` differs from 1 by more than the admitted slack.
    #[error("determinant ad - bc = {det} is not 1")]
    Determinant { det: f64 },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    /// The requested operation is undefined on this branch of the parameter space
    /// (for example the weight kernel when `b = 0`).
    #[error("branch error: {0}")]
    Branch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("tolerance exceeded for {what}: residual {residual:.3e} > {tolerance:.3e}")]
    Tolerance {
        what: String,
        residual: f64,
        tolerance: f64,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("smoothness precondition violated: {0}")]
    Smoothness(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl LctError {
    /// Whether the error stems from bad input or configuration, as opposed to
    /// a numerical failure during evaluation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            LctError::Determinant { .. }
                | LctError::NonFinite(_)
                | LctError::Branch(_)
                | LctError::Grid(_)
                | LctError::Shape(_)
                | LctError::Smoothness(_)
                | LctError::InvalidInput(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LctError::Determinant { .. } => "determinant",
            LctError::NonFinite(_) => "non_finite",
            LctError::Branch(_) => "branch",
            LctError::Domain(_) => "domain",
            LctError::Grid(_) => "grid",
            LctError::Tolerance { .. } => "tolerance",
            LctError::Shape(_) => "shape",
            LctError::Smoothness(_) => "smoothness",
            LctError::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T, E = LctError> = std::result::Result<T, E>;
