use std::collections::BTreeSet;

use log::warn;

use super::{EdgeSet, InstanceError};

/// r-uniform hypergraph; every edge is stored as a sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, r: usize, edges: &[Vec<usize>]) -> Result<Self, InstanceError> {
        if r < 2 {
            return Err(InstanceError::Uniformity(r));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (idx, edge) in edges.iter().enumerate() {
            if let Some(&x) = edge.iter().find(|&&x| x >= n) {
                return Err(InstanceError::OutOfRange { index: x, n });
            }
            let mut sorted = edge.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(InstanceError::RepeatedVertex {
                    edge: idx,
                    vertex: w[0],
                });
            }
            if sorted.len() != r {
                return Err(InstanceError::WrongEdgeSize {
                    edge: idx,
                    got: sorted.len(),
                    expected: r,
                });
            }
            if seen.insert(sorted.clone()) {
                normalized.push(sorted);
            } else {
                warn!("dropped duplicate edge {idx}");
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (idx, e) in normalized.iter().enumerate() {
            for &v in e {
                incident[v].push(idx);
            }
        }
        Ok(Self {
            n,
            r,
            edges: normalized,
            incident,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }
}

impl EdgeSet for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge(&self, index: usize) -> &[usize] {
        &self.edges[index]
    }

    fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }
}
