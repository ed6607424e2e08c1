use bisect_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("no {class} instance on {n} vertices after the rejection budget")]
    RejectionBudgetExceeded { class: String, n: usize },
    #[error("solver broke its guarantee: {0}")]
    GuaranteeViolated(String),
}

impl HarnessError {
    /// Process exit code: 2 for broken guarantees, 3 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(Error::AssertionFailed(_)) | HarnessError::GuaranteeViolated(_) => 2,
            _ => 3,
        }
    }
}
