//! Entropy-based randomized fractional coloring for degenerate graphs and
//! hypergraphs.
//!
//! Two procedures process vertices along a degeneracy ordering, assigning
//! each vertex a set of colors `S(v) ⊆ [q]` while maintaining per
//! (vertex, color) weights that form martingales:
//!
//! * [`graph_engine`] colors d-degenerate locally r-colorable graphs;
//! * [`hyper_engine`] colors d-degenerate r-uniform linear hypergraphs of
//!   girth at least 4.
//!
//! Sampling a uniform color `ℓ` and taking `{v : ℓ ∈ S(v)}` yields an
//! independent set ([`analysis::sample_independent_set`]). The
//! [`analysis`] module also carries the diagnostics, Monte Carlo
//! estimators and the exact rational outcome-tree oracle used to check
//! the martingale and validity properties.

pub mod analysis;
pub mod coins;
pub mod colorsets;
pub mod engine;
pub mod generators;
pub mod graph_engine;
pub mod hyper_engine;
pub mod instances;
pub mod weight;

pub use colorsets::ColorSets;
pub use instances::{DegeneracyOrdering, Graph, Hypergraph, LocalColoring};
