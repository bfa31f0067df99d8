use crate::graph::{EdgeId, NodeId};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error("edge id {edge} out of range for a graph with {m} edges")]
    EdgeOutOfRange { edge: EdgeId, m: usize },

    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),

    #[error("no edge between {0} and {1}")]
    MissingEdge(NodeId, NodeId),

    #[error("invalid edge weight {0}: weights must be finite and nonnegative")]
    InvalidWeight(f64),

    #[error("{what} too large: {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("edge set is not a subgraph: edge {0} is not in the host graph")]
    NotASubgraph(EdgeId),

    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("no simple {d}-regular graph on {n} nodes after {attempts} attempts (seed {seed})")]
    RegularGenerationFailed {
        n: usize,
        d: usize,
        seed: u64,
        attempts: usize,
    },

    #[error("randomized rounding found no valid cut: {0}")]
    RoundingFailed(String),

    #[error("exact search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },

    #[error("LP solver failed: {0}")]
    Lp(String),

    #[error("eigensolver did not converge: {0}")]
    Eigen(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
