use thiserror::Error;

/// Failure categories, each mapped to one process exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("{0}")]
    Scenario(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Scenario(_) => 1,
            LabError::Io(_) => 2,
            LabError::Numerical(_) => 3,
        }
    }

    /// Wraps a physics-layer error with the experiment it came from.
    pub fn from_core(context: &str, err: ramsey_core::Error) -> Self {
        let msg = format!("{context}: {err}");
        if err.is_numerical() {
            LabError::Numerical(msg)
        } else {
            LabError::Scenario(msg)
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
