use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("adjacency parameter u={u} out of range 1..={max}")]
    AdjacencyOutOfRange { u: usize, max: usize },
    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<i64>),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("c_u adjacency requires coordinates")]
    MissingCoordinates,
    #[error("vertex index {index} out of range for image of {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown image family `{0}`")]
    UnknownFamily(String),
    #[error("maps live on different images")]
    ImageMismatch,
    #[error("image has no adjacent pair of points")]
    NoEdge,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("image of {size} points exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("points {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
