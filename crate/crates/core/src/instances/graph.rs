use std::collections::BTreeSet;

use log::warn;

use super::{EdgeSet, InstanceError};

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    incident: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, normalizing edge orientation. Duplicate edges
    /// (including reversed copies) are dropped with a warning.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, InstanceError> {
        let mut set = BTreeSet::new();
        let mut duplicates = 0usize;
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(InstanceError::OutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(InstanceError::SelfLoop(u));
            }
            if !set.insert((u.min(v), u.max(v))) {
                duplicates += 1;
            }
        }
        if duplicates > 0 {
            warn!("dropped {duplicates} duplicate edge(s)");
        }
        Ok(Self::from_sorted_edges(
            n,
            set.into_iter().map(|(u, v)| [u, v]).collect(),
        ))
    }

    fn from_sorted_edges(n: usize, edges: Vec<[usize; 2]>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (idx, &[u, v]) in edges.iter().enumerate() {
            adjacency[u].push(v);
            adjacency[v].push(u);
            incident[u].push(idx);
            incident[v].push(idx);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            n,
            adjacency,
            edges,
            incident,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// First triangle `(a, b, c)` with `a < b < c`, if any.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        for &[a, b] in &self.edges {
            // merge-intersect the two sorted lists, looking above b
            let (mut i, mut j) = (0, 0);
            let (na, nb) = (&self.adjacency[a], &self.adjacency[b]);
            while i < na.len() && j < nb.len() {
                match na[i].cmp(&nb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if na[i] > b {
                            return Some([a, b, na[i]]);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        None
    }
}

impl EdgeSet for Graph {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(InstanceError::SelfLoop(0)));
    }

    #[test]
    fn reversed_duplicate_is_merged() {
        let g = Graph::new(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(InstanceError::OutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn triangle_detection() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.find_triangle(), Some([0, 1, 2]));
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.find_triangle(), None);
    }
}
