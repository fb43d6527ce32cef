use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at q = {0}")]
    PoleAtPoint(String),
    #[error("invalid generator position {i} for {n} strands")]
    InvalidPosition { n: usize, i: usize },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("tangle is not square ({n}, {m})")]
    NotSquare { n: usize, m: usize },
    #[error("invalid tangle: {0}")]
    InvalidTangle(String),
    #[error("sequence is not admissible")]
    NotAdmissible,
    #[error("parity mismatch: n = {n}, k = {k}")]
    ParityMismatch { n: usize, k: usize },
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("linear system has no unique solution: {0}")]
    NonUnique(String),
    #[error("no such block: {0}")]
    NoSuchBlock(String),
    #[error("saddle would not be planar: {0}")]
    NotPlanar(String),
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("tangle has no circle")]
    NoCircle,
    #[error("map is not closed: {0}")]
    NotClosed(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("map is not null-homotopic: {0}")]
    NotNullHomotopic(String),
    #[error("index poset violates the chain condition")]
    ChainConditionViolated,
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("combing hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not a distinguished triangle: {0}")]
    NotATriangle(String),
    #[error("could not complete morphism of triangles: {0}")]
    CompletionFailed(String),
    #[error("complex is unbounded")]
    Unbounded,
    #[error("homotopy not found: {0}")]
    HomotopyNotFound(String),
    #[error("obstruction is nonzero: {0}")]
    ObstructionNonzero(String),
    #[error("bad factorization: {0}")]
    BadFactorization(String),
    #[error("requested size exceeds desk scale: {0}")]
    ScaleExceeded(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
