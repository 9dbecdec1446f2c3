//! Instance model: graphs, uniform hypergraphs, degeneracy orderings, local
//! colorings and the structural validators the engines depend on.

mod graph;
mod hypergraph;
pub mod io;
mod local;
mod ordering;
mod validate;

pub use graph::Graph;
pub use hypergraph::Hypergraph;
pub use local::{find_local_coloring, LocalColoring, LocalColoringError};
pub use ordering::{degeneracy_ordering, DegeneracyOrdering};
pub use validate::{
    check_linear, check_triangle_free, check_triangle_free_general, LinearityReport, TriangleReport,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {index} out of range for n = {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("edge {edge} has {got} vertices, expected {expected}")]
    WrongEdgeSize {
        edge: usize,
        got: usize,
        expected: usize,
    },
    #[error("uniformity must be at least 2, got {0}")]
    Uniformity(usize),
    #[error("ordering is not a permutation of 0..{0}")]
    BadPermutation(usize),
}

/// Read-only view shared by graphs and hypergraphs: a vertex count and a
/// list of sorted edges.
pub trait EdgeSet {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn edge(&self, index: usize) -> &[usize];
    /// Indices of the edges containing `v`.
    fn incident(&self, v: usize) -> &[usize];
}
