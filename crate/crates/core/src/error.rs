use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not simple")]
    NotSimple,
    #[error("matching is not perfect")]
    NotPerfect,
    #[error("malformed cycle/path structure: {0}")]
    MalformedStructure(String),
    #[error("invalid balanced family: {0}")]
    InvalidFamily(String),
    #[error("improper edge coloring: {0}")]
    ImproperColoring(String),
    #[error("forest edge set has {edges} edges on {vertices} vertices")]
    TooManyEdges { edges: usize, vertices: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("forest bisection search exhausted its budget")]
    InitializationExhausted,
    #[error("structure assertion failed: {0}")]
    StructureAssertionFailed(String),
    #[error("unhandled chord pattern: {0}")]
    UnhandledChordPattern(String),
    #[error("internal bound assertion failed: {0}")]
    AssertionFailed(String),
    #[error("input is the claw K_1,3")]
    ClawInput,
    #[error("exhaustive search over {n} vertices exceeds the budget of {max}")]
    BudgetExceeded { n: usize, max: usize },
}

impl Error {
    /// True for errors that mean the input violated a documented precondition,
    /// as opposed to an internal guarantee failure.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::AssertionFailed(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
