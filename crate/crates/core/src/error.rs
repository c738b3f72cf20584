use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("every weight is zero")]
    AllZeroWeights,
    #[error("weight {index} is negative or not finite ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("risk value {index} must be finite and nonnegative, got {value}")]
    InvalidRisk { index: usize, value: f64 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("regularization factor must be positive and finite, got {0}")]
    NonPositiveLambda(f64),
    #[error("beta = {beta} is outside the domain (must exceed {lower})")]
    BetaOutOfDomain { beta: f64, lower: f64 },
    #[error("root finder stopped after {iterations} iterations with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidSolverConfig(&'static str),
    #[error("derivative vector integrates to {total} against the reference, not 1")]
    NotNormalized { total: f64 },
    #[error("derivative entry {index} is zero; the reference is not absolutely continuous")]
    ZeroDerivativeEntry { index: usize },
    #[error("delta = {delta} must exceed the minimum risk {delta_star}")]
    InvalidDelta { delta: f64, delta_star: f64 },
    #[error("epsilon = {0} must lie in (0, 1)")]
    InvalidEpsilon(f64),
    #[error("covariance has only {positive} strictly positive eigenvalues")]
    DegenerateCovariance { positive: usize },
    #[error("need at least {needed} patterns, got {found}")]
    TooFewPatterns { needed: usize, found: usize },
    #[error("pattern {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("bad magic number in {path}: expected {expected:#010x}, found {found:#010x}")]
    BadMagic {
        path: PathBuf,
        expected: u32,
        found: u32,
    },
    #[error("{path} is truncated")]
    TruncatedFile { path: PathBuf },
    #[error("image size in {path} is {rows}x{cols}, expected 28x28")]
    ImageDimensionMismatch { path: PathBuf, rows: u32, cols: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable variant name, printed by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::AllZeroWeights => "AllZeroWeights",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::InvalidRisk { .. } => "InvalidRisk",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonPositiveLambda(_) => "NonPositiveLambda",
            Error::BetaOutOfDomain { .. } => "BetaOutOfDomain",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidSolverConfig(_) => "InvalidSolverConfig",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::ZeroDerivativeEntry { .. } => "ZeroDerivativeEntry",
            Error::InvalidDelta { .. } => "InvalidDelta",
            Error::InvalidEpsilon(_) => "InvalidEpsilon",
            Error::DegenerateCovariance { .. } => "DegenerateCovariance",
            Error::TooFewPatterns { .. } => "TooFewPatterns",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptyDataset => "EmptyDataset",
            Error::InvalidImage(_) => "InvalidImage",
            Error::BadMagic { .. } => "BadMagic",
            Error::TruncatedFile { .. } => "TruncatedFile",
            Error::ImageDimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
