use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {}", .0.join("; "))]
    InvalidNetwork(Vec<String>),
    #[error("{free} free vertices exceed the cut enumeration limit of {limit}")]
    TooLarge { free: usize, limit: usize },
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("orientation assignment leaves edge `{0}` undirected")]
    MissingOrientation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("directed graph has a cycle through `{0}`")]
    Cyclic(String),
    #[error("dimension overflow while computing {0}")]
    Overflow(&'static str),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("prime {p} must exceed boundary dimension {needed}")]
    FieldTooSmall { p: u64, needed: u64 },
    #[error("transform rejected: {0}")]
    Transform(String),
    #[error("message {message} outside alphabet of size {l}")]
    MessageOutOfRange { message: usize, l: usize },
    #[error("search budget of {0} table evaluations exhausted")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
