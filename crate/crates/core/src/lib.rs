//! Subgraphs that survive bounded faulty-degree edge failures.
//!
//! A fault set `F` has faulty-degree `deg(F)`, the largest number of failed
//! edges touching any single node. This crate builds and checks subgraphs
//! `H ⊆ G` whose guarantees hold for every `F` with `deg(F) ≤ f`:
//!
//! * connectivity certificates ([`certificate`]), built from min-degree
//!   peeling, expander decomposition and routing-based sparsification;
//! * greedy `(2k−1)`-spanners ([`greedy`]), both the exact version and the
//!   polynomial-time version driven by an LP-rounding approximation for
//!   min-max length-bounded cuts ([`lbc`]);
//! * the clustering-based 3-spanner ([`cluster`]).
//!
//! The [`generators`] and [`fault`] modules provide the graph families whose
//! only valid subgraph is the graph itself, together with the adversarial
//! fault sets that witness this, so every construction can be checked
//! against an exact oracle.

pub mod certificate;
pub mod cluster;
mod error;
pub mod fault;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod lbc;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, EdgeOrder, FaultSet, Graph, NodeId};
