use thiserror::Error;

use crate::graph::VertexId;

/// Errors produced anywhere in the reduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    Range { vertex: VertexId, n: usize },

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("graph is not chordal: peeling stalled with {remaining} vertices left")]
    NotChordal { remaining: usize },

    #[error("cells {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("fix edge {0}-{1} is already present in the host")]
    AlreadyPresent(VertexId, VertexId),

    #[error("malformed gadget: {0}")]
    MalformedGadget(String),

    #[error("elimination exceeded the round limit of {0}")]
    RoundLimitExceeded(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("reducer failed: {0}")]
    ReducerFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
