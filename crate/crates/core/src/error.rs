use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("time step {t} is outside a grid of {steps} steps")]
    StepOutOfRange { t: usize, steps: usize },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Model(#[from] milp::ModelError),
    #[error("mode 2 needs a target truck count")]
    MissingTarget,
    #[error("mode 3 needs a budget")]
    MissingBudget,
    #[error("budget must be non-negative, got {0}")]
    NegativeBudget(f64),
    #[error("charger catalog: {0}")]
    Catalog(String),
    #[error("instance is not valid: {0}")]
    InvalidInstance(String),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("trace for `{truck}`: {msg}")]
    Trace { truck: String, msg: String },
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("synthetic spec: {0}")]
    Spec(String),
    #[error(transparent)]
    CsvLib(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("capacity fraction must be in (0, 1], got {0}")]
    Fraction(f64),
    #[error("year {year} is outside the milestone span {first}..={last}")]
    YearOutOfSpan { year: i32, first: i32, last: i32 },
    #[error("mode 1 result decreased with more capacity: {0}")]
    NotMonotone(String),
    #[error("milestones must be non-empty and sorted by year")]
    Milestones,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
