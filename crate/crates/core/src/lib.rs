//! Channel allocation for device-to-device (D2D) links underlaying an
//! OFDMA cellular uplink.
//!
//! Two allocators are provided: a pairwise conflict-graph colorer
//! ([`conflict_graph`]) and an interference-hypergraph colorer
//! ([`hypergraph_alloc`]) that also captures cumulative interference from
//! several individually weak interferers. [`evaluator`] scores allocations
//! by Shannon capacity and carries an exhaustive optimal oracle for small
//! instances; [`harness`] drives Monte Carlo sweeps over random drops.
//!
//! Vertex layout everywhere: cellular UEs are `0..N`, D2D pairs are
//! `N..N+M`.

pub mod config;
pub mod conflict_graph;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod hypergraph;
pub mod hypergraph_alloc;
pub mod ops;
pub mod packing;
pub mod radio;
pub mod rng;
pub mod scenario;
pub mod units;

pub use config::{ColorChoice, HyperColoring, SimConfig};
pub use conflict_graph::ConflictGraph;
pub use error::{Error, Result};
pub use evaluator::{Allocation, TrialMetrics, Violation};
pub use hypergraph::{Hypergraph, IncidenceMatrix, Vertex};
pub use hypergraph_alloc::{EdgeKind, InterferenceHypergraph};
pub use ops::OpCounter;
pub use radio::LinkGains;
pub use scenario::Drop;
