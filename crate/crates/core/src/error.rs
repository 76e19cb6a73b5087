use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bag is empty")]
    EmptyBag,

    #[error("element is not present in the bag")]
    AbsentElement,

    #[error("ordering has {got} elements but the bag holds {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("significance level {0} is outside (0, 1)")]
    InvalidLevel(f64),

    #[error("measure `{measure}` requires {requirement}")]
    MeasurePrecondition {
        measure: &'static str,
        requirement: String,
    },

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("empty constraint set: {0}")]
    EmptyConstraint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn precondition(measure: &'static str, requirement: impl Into<String>) -> Self {
        Error::MeasurePrecondition {
            measure,
            requirement: requirement.into(),
        }
    }
}
