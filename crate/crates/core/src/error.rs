use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("{what} budget exceeded: need {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertices {u} and {v} are not in a common class at level {level}")]
    NotInCommonClass {
        u: VertexId,
        v: VertexId,
        level: usize,
    },

    #[error("no eligible host forest for edge {edge}")]
    NoEligibleHost { edge: EdgeId },

    #[error("forest packing search failed at level {level}: {reason}")]
    PackingFailed { level: usize, reason: String },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
