use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    GridSize(usize),

    #[error("empty domain: x_max ({x_max}) must exceed x_min ({x_min})")]
    Domain { x_min: f64, x_max: f64 },

    #[error("field has {found} samples, grid has {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("negative potential value {value} at index {index}")]
    NegativePotential { index: usize, value: f64 },

    #[error("epsilon {0} outside (0, 1]")]
    Epsilon(f64),

    #[error("fractional order {0} must be positive")]
    Order(f64),

    #[error("support [{lo}, {hi}] does not fit inside the domain")]
    Support { lo: f64, hi: f64 },

    #[error("mollifier at epsilon {0} is not resolved by the grid")]
    Unresolved(f64),

    #[error("zero pivot in tridiagonal elimination at row {0}")]
    ZeroPivot(usize),

    #[error("invalid solver configuration: {0}")]
    Config(&'static str),

    #[error("fit needs {0}")]
    Fit(&'static str),

    #[error("numerical abort at step {step}: max |u| = {max_abs}")]
    NumericalAbort { step: usize, max_abs: f64 },
}
