use thiserror::Error;

/// Errors produced by grid-set construction, kernels and the pipelines built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid scales differ: 1/{left} vs 1/{right}")]
    ScaleMismatch { left: u64, right: u64 },

    #[error("empty set: a discretized set must have positive measure")]
    EmptySet,

    #[error("invalid grid denominator {0}: need n >= 2")]
    InvalidScale(u64),

    #[error("cell {cell} at 1/{n} lies outside the bounding box (-{bound}, {bound})")]
    OutOfBounds { cell: i64, n: u64, bound: i64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("fft convolution lost precision: residue {residue:.3e} at index {index}")]
    Precision { index: usize, residue: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("generator failed after {attempts} attempts: {reason}")]
    GeneratorExhausted { attempts: u32, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
