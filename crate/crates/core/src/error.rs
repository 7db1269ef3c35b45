use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    ParseAt {
        row: usize,
        column: String,
        message: String,
    },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("vertex set width {found} does not match graph order {expected}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("edge ({0}, {1}) not present in graph")]
    EdgeNotFound(usize, usize),

    #[error("resource limit exceeded: more than {limit} connected sets enumerated")]
    ResourceLimit { limit: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("inconsistent contraction state: {0}")]
    InconsistentState(String),

    #[error("unknown category {value:?} for feature {feature:?}{}", location(*row))]
    UnknownCategory {
        feature: String,
        value: String,
        row: Option<usize>,
    },

    #[error("missing value for categorical feature {feature:?}{}", location(*row))]
    MissingValue { feature: String, row: Option<usize> },

    #[error("missing target column {0:?}")]
    MissingTarget(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("degenerate target: {0}")]
    DegenerateTarget(String),

    #[error("AUROC undefined: targets contain a single class")]
    AurocUndefined,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn location(row: Option<usize>) -> String {
    row.map(|r| format!(" at row {r}")).unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
