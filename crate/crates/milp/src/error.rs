use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate constraint tag `{0}`")]
    DuplicateTag(String),
    #[error("variable index {0} does not exist")]
    UnknownVariable(usize),
    #[error("invalid bounds for `{var}`: [{lower}, {upper}]")]
    InvalidBounds { var: String, lower: f64, upper: f64 },
    #[error("non-finite coefficient in `{0}`")]
    NonFinite(String),
    #[error("variable listed twice in `{0}`")]
    DuplicateTerm(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{count} free integer variables exceed the enumeration guard of {limit}")]
    TooManyIntegers { count: usize, limit: usize },
    #[error("integer variable `{0}` has an infinite bound")]
    UnboundedInteger(String),
    #[error("{0} assignments exceed the enumeration guard")]
    TooManyAssignments(u128),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FormatError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolutionFileError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown variable names: {}", .0.join(", "))]
    UnknownNames(Vec<String>),
    #[error("missing values for: {}", .0.join(", "))]
    MissingValues(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
