use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("path `{path}` does not address a node of `{term}`")]
    InvalidPath { path: String, term: String },

    #[error("catalan({0}) does not fit in 64 bits")]
    Overflow(u64),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("exhaustive search needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("variable `{0}` has no value in the environment")]
    MissingVariable(String),

    #[error("element {element} is out of range for a groupoid of order {order}")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("register {0} is assigned by more than one equation")]
    DuplicateTarget(u32),

    #[error("{0}")]
    InvalidOperation(String),

    #[error("not ordered terms: {0}")]
    NotOrdered(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("{0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Short stable identifier used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::InvalidVariable(_) => "invalid-variable",
            Error::InvalidPath { .. } => "invalid-path",
            Error::Overflow(_) => "overflow",
            Error::ResourceBound(_) => "resource-bound",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::MissingVariable(_) => "missing-variable",
            Error::ElementOutOfRange { .. } => "out-of-range",
            Error::InvalidGroupoid(_) => "invalid-groupoid",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::DuplicateTarget(_) => "duplicate-target",
            Error::InvalidOperation(_) => "invalid-operation",
            Error::NotOrdered(_) => "not-ordered",
            Error::InvalidWitness(_) => "invalid-witness",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
