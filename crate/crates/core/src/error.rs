use thiserror::Error;

use crate::pauli::PauliOperator;

/// Errors raised by graph construction, stabilizer algebra, closed-form QFI
/// evaluation and the dense oracle.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    GraphParse(String),

    #[error("vertex {vertex} out of range in edge [{i}, {j}] (n = {n})")]
    VertexOutOfRange { vertex: usize, i: usize, j: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("vertex {0} is isolated; the closed-form QFI requires every vertex to have a neighbour")]
    IsolatedVertex(usize),

    #[error("invalid bundle sizes: {0}")]
    InvalidBundle(String),

    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("cannot parse Pauli string {0:?}")]
    PauliParse(String),

    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),

    #[error("{what} needs n <= {limit}, got n = {n}")]
    SizeGuard { what: &'static str, n: usize, limit: usize },

    #[error("group contains {witness}, so the X-pair counting formula does not apply")]
    BadXForm { witness: PauliOperator },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid erasure pattern: {0}")]
    InvalidErasure(String),

    #[error("formula precondition violated: {0}")]
    Precondition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("eigendecomposition check failed: {0}")]
    Eigen(String),

    #[error("not a pairing stabilizer: {0}")]
    InvalidPairing(String),

    #[error("uninformative operating point at theta = {0}")]
    Uninformative(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
