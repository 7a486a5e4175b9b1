use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the algebra, state and estimation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a polynomial algebra needs at least one variable")]
    NoVariables,

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("operands live in algebras with {left} and {right} variables")]
    NvarsMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("moment of order {required} requested but the state only covers order {available}")]
    OrderExceeded { required: usize, available: usize },

    #[error("no moment recorded for word {0:?}")]
    MissingMoment(Vec<usize>),

    #[error("partition order {0} outside the supported range 1..=16")]
    PartitionOrder(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("centering defect {defect:.3e} exceeds tolerance {tolerance:.1e}: no Stein kernel exists for this potential")]
    Inadmissible { defect: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed input at `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for the "moment budget" family of failures.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::OrderExceeded { .. } | Error::MissingMoment(_) | Error::PartitionOrder(_)
        )
    }
}
