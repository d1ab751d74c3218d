use thiserror::Error;

use crate::weight::WeightParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Weight(#[from] WeightParseError),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("self-loop on vertex `{0}` is not allowed")]
    SelfLoop(String),

    #[error("arc {from} -> {to} is not present in the graph")]
    MissingArc { from: String, to: String },

    #[error("out-arc map contains a directed cycle")]
    NotAForest,

    #[error("graph has {n} vertices, above the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("graph has {0} vertices; at most {max} are supported", max = crate::vset::MAX_VERTICES)]
    TooManyVertices(usize),

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("component count {k} is outside 1..={n}")]
    LevelOutOfRange { k: usize, n: usize },

    #[error("level {k} is infeasible: phi^{k} = inf")]
    Infeasible { k: usize },

    #[error("generator set must contain every root; `{0}` is missing")]
    MissingRoot(String),

    #[error("graph is not symmetric: arc {from} -> {to} has no matching reverse arc of equal weight")]
    Asymmetric { from: String, to: String },

    #[error("arc weights overflow the exact 128-bit representation")]
    WeightOverflow,

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
