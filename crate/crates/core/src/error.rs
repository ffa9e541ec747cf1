use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: usize, range: &'static str },

    #[error("x = {x} is outside the domain: {reason}")]
    Domain { x: f64, reason: String },

    #[error("x = {x} is at a pole of the {kind} branch")]
    Pole { x: f64, kind: &'static str },

    #[error("M^-1 is singular at x = {x}")]
    SingularMatrix { x: f64 },

    #[error("parameter guard violated: {0}")]
    ParameterGuard(String),

    #[error("no such bound state: {0}")]
    NoBoundState(String),

    #[error("no normalizable ground state for kappa = {kappa}: annihilation residual {residual:e}")]
    MissingGroundState { kappa: f64, residual: f64 },

    #[error("problem size {requested} exceeds the configured budget of {budget} unknowns")]
    MemoryBudget { requested: usize, budget: usize },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("zero-norm grid function")]
    ZeroNorm,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Numerical failures (as opposed to bad input) map to their own CLI exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::MissingGroundState { .. }
                | Error::MemoryBudget { .. }
                | Error::Numerical(_)
                | Error::ZeroNorm
        )
    }
}
