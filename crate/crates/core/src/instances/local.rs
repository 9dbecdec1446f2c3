use thiserror::Error;

use super::Graph;

/// For every vertex `v`, a proper coloring `φ_v : N(v) → [r]` of `G[N(v)]`.
///
/// `classes[v][i]` is the class of `graph.neighbors(v)[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalColoring {
    pub r: usize,
    pub classes: Vec<Vec<u32>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalColoringError {
    #[error("at least one class is required")]
    NoClasses,
    #[error("search budget exhausted at vertex {vertex}; retry with a larger budget")]
    BudgetExceeded { vertex: usize },
    #[error("neighborhood of vertex {vertex} is not {r}-colorable (exhaustive search)")]
    NotColorable { vertex: usize, r: usize },
    #[error("local coloring at vertex {vertex} is not proper or has the wrong shape")]
    Improper { vertex: usize },
}

impl LocalColoring {
    pub fn class(&self, v: usize, neighbor_index: usize) -> usize {
        self.classes[v][neighbor_index] as usize
    }

    /// Checks shape, class range and properness on every `G[N(v)]`.
    pub fn verify(&self, graph: &Graph) -> Result<(), LocalColoringError> {
        if self.classes.len() != graph.n() {
            return Err(LocalColoringError::Improper { vertex: 0 });
        }
        for v in 0..graph.n() {
            let nbrs = graph.neighbors(v);
            let cls = &self.classes[v];
            if cls.len() != nbrs.len() || cls.iter().any(|&c| c as usize >= self.r) {
                return Err(LocalColoringError::Improper { vertex: v });
            }
            for (i, &u) in nbrs.iter().enumerate() {
                for (j, &w) in nbrs.iter().enumerate().skip(i + 1) {
                    if cls[i] == cls[j] && graph.has_edge(u, w) {
                        return Err(LocalColoringError::Improper { vertex: v });
                    }
                }
            }
        }
        Ok(())
    }
}

enum Search {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Backtrack<'a> {
    adj: &'a [Vec<usize>],
    order: &'a [usize],
    colors: Vec<Option<u32>>,
    r: u32,
    nodes: u64,
    budget: u64,
}

impl Backtrack<'_> {
    fn run(&mut self, depth: usize, used: u32) -> Search {
        if depth == self.order.len() {
            return Search::Found;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Search::OutOfBudget;
        }
        let x = self.order[depth];
        // classes are interchangeable: never open more than one new class
        let limit = (used + 1).min(self.r);
        for c in 0..limit {
            if self.adj[x].iter().any(|&y| self.colors[y] == Some(c)) {
                continue;
            }
            self.colors[x] = Some(c);
            match self.run(depth + 1, used.max(c + 1)) {
                Search::Exhausted => {}
                other => return other,
            }
        }
        self.colors[x] = None;
        Search::Exhausted
    }
}

/// Exact backtracking search for a proper `r`-coloring of every
/// neighborhood, with a node budget per neighborhood.
pub fn find_local_coloring(
    graph: &Graph,
    r: usize,
    budget: u64,
) -> Result<LocalColoring, LocalColoringError> {
    if r == 0 {
        return Err(LocalColoringError::NoClasses);
    }
    let mut classes = Vec::with_capacity(graph.n());
    for v in 0..graph.n() {
        let nbrs = graph.neighbors(v);
        let local_adj: Vec<Vec<usize>> = nbrs
            .iter()
            .map(|&u| {
                nbrs.iter()
                    .enumerate()
                    .filter(|&(_, &w)| graph.has_edge(u, w))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..nbrs.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(local_adj[i].len()));
        let mut search = Backtrack {
            adj: &local_adj,
            order: &order,
            colors: vec![None; nbrs.len()],
            r: r as u32,
            nodes: 0,
            budget,
        };
        match search.run(0, 0) {
            Search::Found => classes.push(search.colors.into_iter().map(|c| c.unwrap()).collect()),
            Search::Exhausted => return Err(LocalColoringError::NotColorable { vertex: v, r }),
            Search::OutOfBudget => return Err(LocalColoringError::BudgetExceeded { vertex: v }),
        }
    }
    Ok(LocalColoring { r, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_free_is_locally_1_colorable() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let loc = find_local_coloring(&c5, 1, 1_000).unwrap();
        loc.verify(&c5).unwrap();
        assert!(loc.classes.iter().flatten().all(|&c| c == 0));
    }

    #[test]
    fn k3_needs_two_classes() {
        assert_eq!(
            find_local_coloring(&k3(), 1, 1_000),
            Err(LocalColoringError::NotColorable { vertex: 0, r: 1 })
        );
        let loc = find_local_coloring(&k3(), 2, 1_000).unwrap();
        loc.verify(&k3()).unwrap();
    }

    #[test]
    fn tiny_budget_is_reported_as_such() {
        assert_eq!(
            find_local_coloring(&k3(), 2, 1),
            Err(LocalColoringError::BudgetExceeded { vertex: 0 })
        );
    }

    #[test]
    fn verify_catches_improper_coloring() {
        let bad = LocalColoring {
            r: 2,
            classes: vec![vec![0, 0], vec![0, 1], vec![0, 1]],
        };
        assert_eq!(
            bad.verify(&k3()),
            Err(LocalColoringError::Improper { vertex: 0 })
        );
    }
}
