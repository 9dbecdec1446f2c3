use serde::{Deserialize, Serialize};

use crate::instances::EdgeSet;

/// The fractional coloring output: `S(v) ⊆ [q]` for every vertex, colors
/// 0-indexed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorSets {
    pub q: usize,
    pub alpha: f64,
    pub alpha_achieved: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub sets: Vec<Vec<u32>>,
    /// Run configuration (seed, ε, d, …) so the file can be reproduced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

impl ColorSets {
    pub fn new(q: usize, alpha: f64, sets: Vec<Vec<u32>>) -> Self {
        let alpha_achieved = if q == 0 {
            0.0
        } else {
            sets.iter().map(Vec::len).min().unwrap_or(0) as f64 / q as f64
        };
        Self {
            q,
            alpha,
            alpha_achieved,
            r: None,
            kappa: None,
            sets,
            params: None,
        }
    }

    pub fn min_size(&self) -> usize {
        self.sets.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn contains(&self, v: usize, color: u32) -> bool {
        self.sets[v].binary_search(&color).is_ok()
    }

    /// Edges whose member sets have a common color.
    pub fn violations<E: EdgeSet + ?Sized>(&self, instance: &E) -> Vec<usize> {
        (0..instance.edge_count())
            .filter(|&idx| {
                let e = instance.edge(idx);
                let (first, rest) = e.split_first().expect("edges are nonempty");
                self.sets[*first]
                    .iter()
                    .any(|&c| rest.iter().all(|&u| self.contains(u, c)))
            })
            .collect()
    }

    pub fn is_valid_for<E: EdgeSet + ?Sized>(&self, instance: &E) -> bool {
        self.sets.len() == instance.vertex_count() && self.violations(instance).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Graph, Hypergraph};

    #[test]
    fn detects_shared_color_on_edge() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let ok = ColorSets::new(4, 0.25, vec![vec![0, 1], vec![2], vec![0, 3]]);
        assert!(ok.is_valid_for(&g));
        assert_eq!(ok.alpha_achieved, 0.25);
        let bad = ColorSets::new(4, 0.25, vec![vec![0], vec![0], vec![1]]);
        assert_eq!(bad.violations(&g), vec![0]);
    }

    #[test]
    fn hyperedge_needs_full_intersection() {
        let h = Hypergraph::new(3, 3, &[vec![0, 1, 2]]).unwrap();
        let pairwise = ColorSets::new(3, 0.1, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(pairwise.is_valid_for(&h));
        let full = ColorSets::new(3, 0.1, vec![vec![0], vec![0], vec![0]]);
        assert!(!full.is_valid_for(&h));
    }

    #[test]
    fn json_shape() {
        let s = ColorSets::new(2, 0.5, vec![vec![1], vec![0]]);
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["q"], 2);
        assert_eq!(v["sets"][0][0], 1);
        assert!(v.get("kappa").is_none());
    }
}
