//! Cut-sketch gadgets and sublinear min-cut estimation on balanced
//! directed graphs.
//!
//! The crate has three pillars:
//!
//! * weight-packing gadgets (`foreach`, `forall`) that encode bit strings
//!   or gap-Hamming instances into edge weights of balanced directed
//!   graphs and read them back through cut queries, with oracles
//!   (`oracle`) modeling exact, multiplicatively noisy, and sparsified
//!   cut access;
//! * a local-query min-cut estimator (`local`) driven by degree,
//!   neighbor, and adjacency queries, with a guess-and-verify search;
//! * the disjointness-counting reduction (`twosum`) whose gadget graph
//!   turns a min-cut estimate into a communication-style answer with
//!   exact bit accounting.
//!
//! `checks` bundles the acceptance suite shared by the integration tests
//! and the CLI selftest; `families` and `mincut`/`connectivity` provide
//! graph generators and exact cut baselines used as test oracles.

pub mod checks;
pub mod connectivity;
pub mod error;
pub mod families;
pub mod forall;
pub mod foreach;
pub mod graph;
pub mod hadamard;
pub mod local;
pub mod mincut;
pub mod oracle;
pub mod twosum;

pub use error::{Error, Result};
pub use graph::{DirectedWeightedGraph, Edge, NodeSet, UndirectedGraph, REL_TOL};
pub use mincut::MinCut;
pub use oracle::{CutOracle, OracleSpec};
