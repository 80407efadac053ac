use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({0}, {1}) does not exist")]
    EdgeNotFound(VertexId, VertexId),
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(VertexId, VertexId),
    #[error("weight of ({u}, {v}) would decrease from {old} to {new}")]
    WeightDecrease {
        u: VertexId,
        v: VertexId,
        old: f64,
        new: f64,
    },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("invalid edge weight {0}: weights must be finite and at least 1")]
    InvalidWeight(f64),
    #[error("edge weight {0} is not a positive integer")]
    NonIntegerWeight(f64),
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),
    #[error("invalid depth bound {0}")]
    InvalidDepth(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("contract violation at op {op}: {msg}")]
    Contract { op: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
