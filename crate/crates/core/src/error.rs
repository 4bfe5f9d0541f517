use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KdeError {
    #[error("sample is empty")]
    EmptySample,
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("bandwidth must be positive and finite, got {0}")]
    InvalidBandwidth(f64),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("kernel is negative at x = {at} (value {value})")]
    NegativeKernel { at: f64, value: f64 },
    #[error("polynomial degree {alpha} exceeds the supported maximum {max}")]
    DegreeTooLarge { alpha: usize, max: usize },
    #[error(
        "kernel is not differentiable at 0: smoothness requires beta_1 = beta_0 \
         (got beta_0 = {beta0}, beta_1 = {beta1})"
    )]
    NotDifferentiable { beta0: f64, beta1: f64 },
    #[error("derivative order {0} is not supported (expected 0 or 1)")]
    UnsupportedOrder(usize),
    #[error(
        "precision guard: max |y|^alpha = {magnitude:e} exceeds 1e300; \
         use a smaller alpha or rescale the data"
    )]
    PrecisionLoss { magnitude: f64 },
    #[error("polynomial degree {requested} exceeds table degree {available}")]
    DegreeExceedsTables { requested: usize, available: usize },
    #[error("query context does not match sample: {0}")]
    QueryMismatch(String),
    #[error("need at least {need} observations, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("sample is degenerate (all values equal)")]
    DegenerateSample,
    #[error("at least 2 bins are required, got {0}")]
    TooFewBins(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("density ({0}) is not differentiable")]
    NotDifferentiableDensity(char),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
}

pub type Result<T, E = KdeError> = std::result::Result<T, E>;
