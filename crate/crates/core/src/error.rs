use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("edge endpoint {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set does not belong to a graph on {0} vertices")]
    ForeignVertexSet(usize),
    #[error("not a ball: vertex set is empty or induces a disconnected subgraph")]
    NotABall,
    #[error("invalid ball family: {0}")]
    InvalidBallFamily(String),
    #[error("graph has {n} vertices, exhaustive limit for {what} is {limit}; use heuristic mode")]
    SizeLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("search budget of {0} nodes exhausted")]
    Budget(u64),
    #[error("invalid rooted forest: {0}")]
    InvalidForest(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncated power of order {order} exceeds the cap of {cap} vertices")]
    PowerTooLarge { order: u128, cap: usize },
    #[error("no homomorphism {0} -> U for a required color set")]
    MissingWitness(String),
    #[error("no representative is hom-equivalent to component {0:?}")]
    NoRepresentative(Vec<usize>),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
