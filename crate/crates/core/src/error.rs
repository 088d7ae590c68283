use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),

    #[error("expected an odd half-turn size, got {0}")]
    EvenSlit(usize),

    #[error("expected an even half-turn size, got {0}")]
    OddPuncture(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("inconsistent edge constraint: {0}")]
    InconsistentConstraint(String),

    #[error("size {size} exceeds the enumeration limit {limit}")]
    LimitExceeded { size: usize, limit: usize },

    #[error("generator {generator} maps state {state} outside the state space")]
    ClosureViolation { generator: usize, state: String },

    #[error("chain is reducible: state {to} is not reachable from {from}")]
    Reducible { from: String, to: String },

    #[error("singular linear system")]
    Singular,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("region is not bipartite: {0}")]
    NotBipartite(String),

    #[error("parse error: {0}")]
    Parse(String),
}
