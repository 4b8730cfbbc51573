use thiserror::Error;

/// Errors raised by geometric evaluators, quadrature kernels and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} is not supported")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("center is not an interior point of the body")]
    CenterNotInterior,

    #[error("body has no curvature evaluator: {0}")]
    NotSmooth(&'static str),

    #[error("level {s} lies outside the support slab [{lower}, {upper}]")]
    OutOfSlab { s: f64, lower: f64, upper: f64 },

    #[error("linear map is singular")]
    SingularMap,

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature tolerance {tol:e} not met: estimated error {error:e} after {intervals} intervals")]
    ToleranceNotMet {
        tol: f64,
        error: f64,
        intervals: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned fit: residual {residual:e} exceeds 10% of the value spread {spread:e}")]
    IllConditionedFit { residual: f64, spread: f64 },

    #[error("point is not interior to the body")]
    PointNotInterior,

    #[error("integral diverges: the point lies on the boundary")]
    IntegralDiverged,

    #[error("level t = {t} is below the minimum value {minimum} attained at the origin")]
    LevelBelowMinimum { t: f64, minimum: f64 },

    #[error("underflow: {0}")]
    DenominatorUnderflow(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("cap volume {capvol} is not below half the body volume {half}")]
    CapTooLarge { capvol: f64, half: f64 },

    #[error("body must be centrally symmetric")]
    SymmetryRequired,

    #[error("origin is not the Santalo point of the body (gradient norm {0:e})")]
    NotSantaloCentered(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
