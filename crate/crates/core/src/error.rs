use thiserror::Error;

use crate::evaluator::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vertex {vertex} is not in the vertex set")]
    VertexOutOfRange { vertex: usize },

    #[error("hypergraph has no vertices")]
    EmptyHypergraph,

    #[error("hyperedge {index} is empty")]
    EmptyHyperedge { index: usize },

    #[error("vertex {vertex} is not allocated to channel {channel}")]
    NotOnChannel { vertex: usize, channel: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("oracle instance too large: ({k_plus_one})^({vertices}) assignments exceeds {limit}")]
    InstanceTooLarge {
        k_plus_one: usize,
        vertices: usize,
        limit: u64,
    },

    #[error("allocation violates constraints: {0}")]
    Violation(#[from] Violation),

    #[error("no algorithms selected")]
    NoAlgorithms,

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
