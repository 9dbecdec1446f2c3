use std::collections::BTreeSet;

use super::{EdgeSet, InstanceError};

/// Vertex ordering `v_1, …, v_n` together with each vertex's left edges.
///
/// `order[i]` is the vertex at position `i` (0-based), `position` is the
/// inverse permutation. `left_edges[v]` lists the edges in which `v` is the
/// right-most vertex; `d` is the largest such count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    pub order: Vec<usize>,
    pub position: Vec<usize>,
    pub d: usize,
    pub left_edges: Vec<Vec<usize>>,
}

impl DegeneracyOrdering {
    /// Wraps an arbitrary permutation. `d` becomes the maximum left-degree
    /// under it, which is at least the degeneracy of the instance.
    pub fn from_order<E: EdgeSet + ?Sized>(
        instance: &E,
        order: Vec<usize>,
    ) -> Result<Self, InstanceError> {
        let n = instance.vertex_count();
        let mut position = vec![usize::MAX; n];
        if order.len() != n {
            return Err(InstanceError::BadPermutation(n));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(InstanceError::BadPermutation(n));
            }
            position[v] = i;
        }
        let mut left_edges = vec![Vec::new(); n];
        for idx in 0..instance.edge_count() {
            let last = instance
                .edge(idx)
                .iter()
                .copied()
                .max_by_key(|&v| position[v])
                .expect("edges are nonempty");
            left_edges[last].push(idx);
        }
        let d = left_edges.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            order,
            position,
            d,
            left_edges,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn left_degree(&self, v: usize) -> usize {
        self.left_edges[v].len()
    }

    /// `true` when `u` comes before `v`.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }
}

/// Minimum-degree peeling; the reversed removal sequence is the ordering.
/// Ties go to the smallest vertex index.
pub fn degeneracy_ordering<E: EdgeSet + ?Sized>(instance: &E) -> DegeneracyOrdering {
    let n = instance.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| instance.incident(v).len()).collect();
    let mut alive_edge = vec![true; instance.edge_count()];
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut removal = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        removal.push(v);
        for &idx in instance.incident(v) {
            if !alive_edge[idx] {
                continue;
            }
            alive_edge[idx] = false;
            for &u in instance.edge(idx) {
                if u != v {
                    queue.remove(&(degree[u], u));
                    degree[u] -= 1;
                    queue.insert((degree[u], u));
                }
            }
        }
    }
    removal.reverse();
    DegeneracyOrdering::from_order(instance, removal).expect("peeling yields a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Graph, Hypergraph};

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn k4_is_3_degenerate() {
        assert_eq!(degeneracy_ordering(&complete(4)).d, 3);
    }

    #[test]
    fn c5_is_2_degenerate() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(degeneracy_ordering(&c5).d, 2);
    }

    #[test]
    fn single_hyperedge() {
        let h = Hypergraph::new(3, 3, &[vec![0, 1, 2]]).unwrap();
        let ord = degeneracy_ordering(&h);
        assert_eq!(ord.d, 1);
        // ties by smallest index: 0 is peeled first, so it is last
        assert_eq!(ord.order, vec![2, 1, 0]);
        assert_eq!(ord.left_edges[0], vec![0]);
    }

    #[test]
    fn position_inverts_order() {
        let g = complete(5);
        let ord = degeneracy_ordering(&g);
        for (i, &v) in ord.order.iter().enumerate() {
            assert_eq!(ord.position[v], i);
        }
    }

    #[test]
    fn from_order_rejects_non_permutation() {
        let g = complete(3);
        assert!(DegeneracyOrdering::from_order(&g, vec![0, 0, 1]).is_err());
        assert!(DegeneracyOrdering::from_order(&g, vec![0, 1]).is_err());
    }
}
