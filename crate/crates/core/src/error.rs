use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),

    #[error("unknown requirement `{0}`")]
    UnknownId(String),

    #[error("requirement `{0}` is selected by every user or by none; its latent threshold is infinite")]
    DegenerateMarginal(String),

    #[error(
        "covariance between `{first}` and `{second}` is infeasible: joint probability {joint} lies outside [{lower}, {upper}]"
    )]
    InfeasibleCovariance {
        first: String,
        second: String,
        joint: f64,
        lower: f64,
        upper: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("graph has {nodes} nodes; exhaustive enumeration is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<V> = std::result::Result<V, Error>;

impl Error {
    pub(crate) fn format(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
