use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {value}: {reason}")]
    InvalidDimension { value: usize, reason: &'static str },

    #[error("invalid size {value}: {reason}")]
    InvalidSize { value: usize, reason: &'static str },

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("invalid vertex subset: {0}")]
    InvalidSubset(String),

    #[error("{what} too large: {size} exceeds the cap of {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("division by zero in GF(p)")]
    DivisionByZero,

    #[error("field GF({p}) too small: need at least {needed} distinct elements")]
    FieldTooSmall { p: u32, needed: usize },

    #[error("secret length mismatch: expected {expected}, got {got}")]
    SecretLength { expected: usize, got: usize },

    #[error("vertices {0} and {1} do not form an edge; the pair is unqualified")]
    UnqualifiedPair(usize, usize),

    #[error("corrupt share data: {0}")]
    CorruptShare(String),

    #[error("edge cover is incomplete: edge ({0}, {1}) is not covered")]
    IncompleteCover(usize, usize),

    #[error("malformed linear scheme: {0}")]
    MalformedScheme(String),

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by exceeding a capacity limit (vertex caps,
    /// enumeration caps, LP tractability).
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
