//! Exact and constructive tools for Turán-type problems on 3-uniform
//! hypergraphs: pattern catalogue, embedding search, extremal constructions,
//! closed-form counts, small-n exact solvers and a tripartition local search.

pub mod canon;
pub mod constructs;
pub mod embed;
pub mod error;
pub mod formulas;
pub mod hgraph;
pub mod patterns;
pub mod solver;
pub mod stability;

pub use error::{Error, Result};
pub use hgraph::{Hypergraph3, Triple, Vertex};
pub use patterns::{Family, Pattern};
