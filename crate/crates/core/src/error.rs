use thiserror::Error;

/// Errors raised by the numerical kernel, the model builders and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds tolerance)")]
    NotHermitian { asymmetry: f64 },

    #[error("eigenvalue {value:.3e} is below the positivity tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is singular to working precision (pivot {pivot:.3e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix data is invalid: {0}")]
    InvalidMatrix(String),

    #[error("steady state is not unique: {0}")]
    NonUniqueSteadyState(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("propagation did not converge by t = {t:.3e} (|drho/dt| = {derivative:.3e})")]
    NotConverged { t: f64, derivative: f64 },

    #[error("frequency must be positive, got {0}")]
    NonpositiveFrequency(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("all dissipation rates are zero")]
    AllRatesZero,
}

impl Error {
    /// Variant name, as reported on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NegativeEigenvalue { .. } => "NegativeEigenvalue",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::NonUniqueSteadyState(_) => "NonUniqueSteadyState",
            Error::InvalidState(_) => "InvalidState",
            Error::NotConverged { .. } => "NotConverged",
            Error::NonpositiveFrequency(_) => "NonpositiveFrequency",
            Error::InvalidParams(_) => "InvalidParams",
            Error::AllRatesZero => "AllRatesZero",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
