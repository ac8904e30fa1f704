use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel is not stochastic: entries sum to {sum}")]
    NotStochastic { sum: f64 },
    #[error("ellipticity violated: entry {index} is {value} < kappa = {kappa}")]
    EllipticityViolation { index: usize, value: f64, kappa: f64 },
    #[error("kernel has length {len}, expected 2 * dimension = {expected}")]
    KernelLength { len: usize, expected: usize },
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no regeneration could be confirmed before the horizon")]
    Censored,
    #[error("not enough regeneration blocks: {0}")]
    InsufficientRegenerations(&'static str),
    #[error("n = {n} lies in the censored tail (k_n undetermined from {censored_from})")]
    Undetermined { n: usize, censored_from: usize },
    #[error("argument {x} outside the domain of {what}")]
    DomainError { what: &'static str, x: f64 },
    #[error("sample has zero variance")]
    DegenerateSample,
    #[error("variance constant must be positive, got {0}")]
    NonpositiveVariance(f64),
}
