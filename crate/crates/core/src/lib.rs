//! Isomorphism testing for graphs reduced to an extended chordal class:
//! Booth's reduction, forbidden-subgraph elimination with marking trees,
//! coarsest regular simplicial partitions and partition-guided alignment,
//! all checked against an exact backtracking oracle.

pub mod chordal;
pub mod error;
pub mod exec;
pub mod forbidden;
pub mod generate;
pub mod graph;
pub mod marker;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod reducer;
pub mod validate;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{EdgeList, Graph, VertexId, VertexSet};
pub use oracle::{find_isomorphism, VertexMapping};
pub use pipeline::{iso_test, IsoDecision, IsoMode};
pub use reducer::{booth_reduce, eliminate_forbidden, to_extended, ReduceOptions, ReductionTrace};
