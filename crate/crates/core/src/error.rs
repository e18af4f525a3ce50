use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("photon number {n} out of range for truncation {dim}")]
    OutOfRange { n: usize, dim: usize },

    #[error("truncation overflow: occupied |e,{n}> in mode {mode} needs level {} but dimension is {dim}", n + 1)]
    TruncationOverflow { mode: usize, n: usize, dim: usize },

    #[error("zero-probability branch (p = {probability:e})")]
    ZeroProbability { probability: f64 },

    #[error("invalid subsystem selector: {0}")]
    InvalidSelector(String),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TruncationOverflow { .. } | Error::ZeroProbability { .. }
        )
    }
}
