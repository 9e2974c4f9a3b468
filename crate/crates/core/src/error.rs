use thiserror::Error;

use crate::link_cut::ForestError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertices {first} and {second} share the value {value}")]
    DuplicateVertexValues { first: usize, second: usize, value: f64 },

    #[error("invalid tie-break epsilon {epsilon}: {reason}")]
    InvalidEpsilon { epsilon: f64, reason: String },

    #[error("filtration does not match graph: {0}")]
    FiltrationMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Forest(#[from] ForestError),

    #[error("graph {index}: {source}")]
    Batch {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
