use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error(
        "graph is not connected ({components} components); run on its largest connected component"
    )]
    Disconnected { components: usize },

    #[error("graph too large for brute-force subset enumeration ({nodes} nodes, limit {limit})")]
    GraphTooLarge { nodes: usize, limit: usize },

    #[error("motif size {0} is outside the supported range 3..=5")]
    MotifSize(usize),

    #[error("no motif {0} in the catalog")]
    UnknownMotif(crate::MotifId),

    #[error("enumeration aborted after {visited} connected subgraphs (budget {budget}, {roots_done}/{roots_total} roots done)")]
    BudgetExceeded {
        visited: u64,
        budget: u64,
        roots_done: usize,
        roots_total: usize,
    },

    #[error("motif catalog invariant violated: {0}")]
    Catalog(String),

    #[error("no samples collected: every per-motif sum is zero")]
    NoSamples,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("report mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
