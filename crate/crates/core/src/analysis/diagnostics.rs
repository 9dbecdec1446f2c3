//! Potential `P = Σ_c p`, entropy `Q = −Σ_c p ln p` and the pairwise
//! energies of both procedures.

use thiserror::Error;

use crate::engine::{WeightMatrix, SELECTED};
use crate::instances::{DegeneracyOrdering, Graph, Hypergraph};
use crate::weight::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnosticError {
    #[error("vertices {0} and {1} do not span an edge with the second one right-most")]
    NotAnEdge(usize, usize),
}

pub fn potential<W: Weight>(row: &[W]) -> f64 {
    row.iter().map(Weight::to_f64).sum()
}

/// `−Σ p ln p` with `0 ln 0 = 0`.
pub fn entropy<W: Weight>(row: &[W]) -> f64 {
    row.iter()
        .map(Weight::to_f64)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// `H(v_j, v_k) = Σ_{c ∉ B(v_j)} p(v_j, c) p(v_k, c)` for an edge `v_j v_k`.
pub fn graph_energy<W: Weight>(
    state: &WeightMatrix<W>,
    graph: &Graph,
    vj: usize,
    vk: usize,
) -> Result<f64, DiagnosticError> {
    if !graph.has_edge(vj, vk) {
        return Err(DiagnosticError::NotAnEdge(vj, vk));
    }
    Ok((0..state.q)
        .filter(|&c| !state.is_bad(vj, c))
        .map(|c| state.weight(vj, c).to_f64() * state.weight(vk, c).to_f64())
        .sum())
}

/// Hypergraph energy after `processed` vertices: for the edge `e` whose
/// right-most vertex is `v_k` and which contains `v_j`, with `f` the
/// processed part of `e`,
/// `H = Σ_c 1{c ∈ S(u) ∀u ∈ f, c not bad at v_j, v_k} Π_{u ∈ e∖f} p(u, c)`.
pub fn hyper_energy<W: Weight>(
    state: &WeightMatrix<W>,
    hypergraph: &Hypergraph,
    ordering: &DegeneracyOrdering,
    processed: usize,
    vj: usize,
    vk: usize,
) -> Result<f64, DiagnosticError> {
    let edge = ordering.left_edges[vk]
        .iter()
        .map(|&idx| &hypergraph.edges()[idx])
        .find(|e| e.contains(&vj) && vj != vk)
        .ok_or(DiagnosticError::NotAnEdge(vj, vk))?;
    let (f, rest): (Vec<usize>, Vec<usize>) = edge
        .iter()
        .partition(|&&u| ordering.position[u] < processed);
    Ok((0..state.q)
        .filter(|&c| {
            f.iter().all(|&u| state.has(u, c, SELECTED))
                && !state.is_bad(vj, c)
                && !state.is_bad(vk, c)
        })
        .map(|c| {
            rest.iter()
                .map(|&u| state.weight(u, c).to_f64())
                .product::<f64>()
        })
        .sum())
}
