//! Motif (graphlet) statistics for large undirected graphs.
//!
//! The crate estimates the concentration `C(k,m)` and absolute count
//! `|S(k,m)|` of every connected `k`-node motif (`k` in 3..=5) from a simple
//! random walk that only ever asks a node for its neighbor list. The main
//! estimator is the waddling random walk: besides the nodes on the walk it
//! samples a few random neighbors ("waddles") of recent walk nodes so that
//! motifs whose longest simple path is shorter than `k` are still recognised
//! from a short window.
//!
//! Module map:
//!
//! * [`graph`] loads and normalises edge lists into an immutable CSR graph.
//! * [`motif`] enumerates the motif catalog and the per-motif path constants.
//! * [`walk`] is the neighbor-query access model and the seeded walk state.
//! * [`estimate`] holds the estimators, normalisation and the step bound.
//! * [`exact`] computes ground truth by enumeration.
//! * [`experiment`] runs repeated seeded experiments and builds reports.

pub mod error;
pub mod estimate;
pub mod exact;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod motif;
pub mod report;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{EdgeListOptions, Graph, NodeId};
pub use motif::{MotifCatalog, MotifEntry, MotifId};
