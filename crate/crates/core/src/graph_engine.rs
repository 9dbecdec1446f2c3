//! Fractional coloring of d-degenerate locally r-colorable graphs.
//!
//! Vertices are processed along a degeneracy ordering. For each color `c`
//! not pinned at the current vertex `v_i`, an activation coin with
//! probability `p(v_i, c)` and a fair selection coin decide whether `c`
//! joins `S(v_i)`. One class `j ∈ [r]` is drawn per (vertex, color) and
//! shared by all right-neighbors: the neighbors in class `j` of the local
//! coloring `φ_{v_i}` see their weight multiplied by `2r` when `c` was
//! activated but not selected, everybody else drops to 0. Weights that
//! would exceed `1/(2r)·2r = 1` are instead pinned at 1 (or dropped to 0)
//! by an equalizing coin that keeps every weight a martingale.

use serde::Serialize;

use crate::analysis::trace::RunTrace;
use crate::coins::{Coins, CounterCoins, DrawKey, DrawKind};
use crate::engine::{
    snapshot, Engine, EngineError, Mutation, RunOptions, RunOutput, RunStats, WeightMatrix,
    BAD_HIGH, SELECTED,
};
use crate::instances::{DegeneracyOrdering, EdgeSet, Graph, LocalColoring};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphParams {
    pub q: usize,
    pub eps: f64,
    pub r: usize,
    pub d: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// `ln d / ((2 + ε/8) · d · ln(2r))` without domain checks; `eps = 0` gives
/// the limiting value.
pub fn alpha_graph_formula(d: f64, r: f64, eps: f64) -> f64 {
    d.ln() / ((2.0 + eps / 8.0) * d * (2.0 * r).ln())
}

/// Initial weight α for the graph procedure.
pub fn alpha_graph(d: usize, r: usize, eps: f64) -> Result<f64, EngineError> {
    if d < 2 || r < 1 || !(eps > 0.0) {
        return Err(EngineError::Domain(format!(
            "alpha needs d >= 2, r >= 1, eps > 0 (got d={d}, r={r}, eps={eps})"
        )));
    }
    let alpha = alpha_graph_formula(d as f64, r as f64, eps);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EngineError::Domain(format!(
            "alpha = {alpha} is not in (0, 1)"
        )));
    }
    Ok(alpha)
}

/// Probability of pinning a weight at 1 when `2r·p > 1`:
/// `μ = (p − 1/(2r)) / (1 − 1/(2r))`.
pub fn equalizer_prob_graph(pk: f64, r: usize) -> Result<f64, EngineError> {
    let floor = 1.0 / (2 * r) as f64;
    if r == 0 || !(pk > floor && pk <= 1.0) {
        return Err(EngineError::Domain(format!(
            "equalizer needs p in (1/(2r), 1], got p={pk}, r={r}"
        )));
    }
    Ok(pin_probability(&pk, r))
}

fn pin_probability<W: Weight>(pk: &W, r: usize) -> W {
    let two_r = W::from_usize(2 * r);
    let floor = W::one() / two_r;
    (pk.clone() - floor.clone()) / (W::one() - floor)
}

impl GraphParams {
    /// Parameters with α derived from `(d, r, ε)`.
    pub fn new(q: usize, eps: f64, r: usize, d: usize, seed: u64) -> Result<Self, EngineError> {
        let alpha = alpha_graph(d, r, eps)?;
        let params = Self {
            q,
            eps,
            r,
            d,
            alpha,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    /// Replaces α by an explicit initial weight.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self, EngineError> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    /// Parameters with an explicit initial weight and no α formula.
    pub fn explicit(q: usize, r: usize, alpha: f64, seed: u64) -> Result<Self, EngineError> {
        let params = Self {
            q,
            eps: 0.0,
            r,
            d: 0,
            alpha,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.q == 0 || self.r == 0 {
            return Err(EngineError::Domain("q and r must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(EngineError::Domain(format!(
                "initial weight {} is not in (0, 1]",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Algorithm state bound to one instance.
pub struct GraphEngine<'a> {
    graph: &'a Graph,
    ordering: &'a DegeneracyOrdering,
    params: GraphParams,
    options: RunOptions,
    /// Right-neighbors of each vertex with their class under `φ_v`.
    right: Vec<Vec<(usize, u32)>>,
}

impl<'a> GraphEngine<'a> {
    pub fn new(
        graph: &'a Graph,
        ordering: &'a DegeneracyOrdering,
        local: &LocalColoring,
        params: GraphParams,
    ) -> Result<Self, EngineError> {
        params.validate()?;
        if ordering.len() != graph.n() {
            return Err(EngineError::Structure(
                "ordering does not match the graph".into(),
            ));
        }
        if local.r != params.r {
            return Err(EngineError::Structure(format!(
                "local coloring uses {} classes, parameters say r = {}",
                local.r, params.r
            )));
        }
        local
            .verify(graph)
            .map_err(|e| EngineError::Structure(e.to_string()))?;
        let right = (0..graph.n())
            .map(|v| {
                graph
                    .neighbors(v)
                    .iter()
                    .enumerate()
                    .filter(|&(_, &k)| ordering.precedes(v, k))
                    .map(|(idx, &k)| (k, local.classes[v][idx]))
                    .collect()
            })
            .collect();
        Ok(Self {
            graph,
            ordering,
            params,
            options: RunOptions::default(),
            right,
        })
    }

    pub fn with_options(mut self, options: RunOptions) -> Self {
        self.options = options;
        self
    }

    pub fn ordering(&self) -> &DegeneracyOrdering {
        self.ordering
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn options(&self) -> &RunOptions {
        &self.options
    }

    /// Runs the procedure over any weight domain and coin source.
    pub fn run_generic<W: Weight, C: Coins<W>>(
        &self,
        q: usize,
        init: W,
        coins: &mut C,
    ) -> RunOutput<W> {
        let n = self.graph.n();
        let r = self.params.r;
        let check = self.options.check_invariants;
        let mut state = WeightMatrix::filled(n, q, init.clone());
        let mut stats = RunStats::default();
        let mut trace = RunTrace::new(self.options.watch.clone());

        let one = W::one();
        let half = W::half();
        let two_r = W::from_usize(2 * r);
        let zero = W::zero();

        snapshot(&mut trace, &state, &self.ordering.position, 0);
        for (step, &v) in self.ordering.order.iter().enumerate() {
            let right = &self.right[v];
            for c in 0..q {
                let iv = state.idx(v, c);
                if state.flags[iv] & BAD_HIGH != 0 {
                    continue;
                }
                let pv = state.p[iv].clone();
                if !coins.flip(&pv, DrawKey::new(step, c, DrawKind::Activation, 0)) {
                    stats.carried += right.len() as u64;
                    continue;
                }
                let selected = coins.flip(&half, DrawKey::new(step, c, DrawKind::Selection, 0));
                if selected {
                    state.flags[iv] |= SELECTED;
                }
                let class = coins.class(r, DrawKey::new(step, c, DrawKind::Class, 0)) as u32;
                stats.class_draws += 1;

                for &(k, k_class) in right {
                    let ik = state.idx(k, c);
                    if state.flags[ik] & BAD_HIGH != 0 || state.p[ik].is_zero() {
                        stats.carried += 1;
                        continue;
                    }
                    let pk = state.p[ik].clone();
                    let scaled = two_r.clone() * pk.clone();
                    let boosted = !selected && k_class == class;
                    let pin = if scaled <= one {
                        stats.main_case += 1;
                        if boosted {
                            if scaled == one {
                                true
                            } else {
                                state.p[ik] = scaled;
                                false
                            }
                        } else {
                            state.p[ik] = zero.clone();
                            false
                        }
                    } else {
                        stats.upper_case += 1;
                        let pin = boosted || {
                            let mu = match self.options.mutation {
                                Mutation::NoPinEqualizer => zero.clone(),
                                _ => pin_probability(&pk, r),
                            };
                            coins.flip(&mu, DrawKey::new(step, c, DrawKind::Pin, k))
                        };
                        if !pin {
                            state.p[ik] = zero.clone();
                        }
                        pin
                    };
                    if pin {
                        state.p[ik] = one.clone();
                        state.flags[ik] |= BAD_HIGH;
                        stats.pinned_high += 1;
                    }
                    if check {
                        let w = &state.p[ik];
                        if !w.is_zero() && (*w < init || *w > one) {
                            stats.violation(|| {
                                format!("weight {w:?} of vertex {k}, color {c} outside [alpha, 1]")
                            });
                        }
                    }
                }
            }
            snapshot(&mut trace, &state, &self.ordering.position, step + 1);
        }
        trace.final_sizes = (0..n).map(|v| state.selected(v).len()).collect();
        RunOutput {
            state,
            stats,
            trace,
        }
    }
}

impl Engine for GraphEngine<'_> {
    fn instance(&self) -> &dyn EdgeSet {
        self.graph
    }

    fn q(&self) -> usize {
        self.params.q
    }

    fn initial_weight(&self) -> f64 {
        self.params.alpha
    }

    fn run_with(&self, q: usize, seed: u64) -> Result<RunOutput<f64>, EngineError> {
        let mut coins = CounterCoins::new(seed);
        Ok(self.run_generic(q, self.params.alpha, &mut coins))
    }

    fn params_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.params).expect("params serialize");
        v["mode"] = "graph".into();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{degeneracy_ordering, find_local_coloring};

    #[test]
    fn alpha_closed_form() {
        let a = alpha_graph(100, 1, 8.0).unwrap();
        assert!((a - 100f64.ln() / (300.0 * 2f64.ln())).abs() < 1e-15);
        assert!((a - 0.0221462).abs() < 1e-7);
        // ε → 0 limit
        assert!((alpha_graph_formula(100.0, 1.0, 0.0) - 0.0332193).abs() < 1e-7);
    }

    #[test]
    fn alpha_decreases_in_d() {
        let mut prev = alpha_graph(3, 2, 1.0).unwrap();
        for d in 4..200 {
            let a = alpha_graph(d, 2, 1.0).unwrap();
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn alpha_domain() {
        assert!(alpha_graph(1, 1, 1.0).is_err());
        assert!(alpha_graph(10, 1, 0.0).is_err());
        assert!(alpha_graph(10, 0, 1.0).is_err());
    }

    #[test]
    fn equalizer_values() {
        assert!((equalizer_prob_graph(0.75, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((equalizer_prob_graph(0.8, 2).unwrap() - 0.55 / 0.75).abs() < 1e-15);
        assert_eq!(equalizer_prob_graph(1.0, 3).unwrap(), 1.0);
        assert!(equalizer_prob_graph(0.5, 1).is_err());
        assert!(equalizer_prob_graph(1.5, 1).is_err());
    }

    fn isolated_run(q: usize, alpha: f64, seed: u64) -> RunOutput<f64> {
        let g = Graph::new(1, &[]).unwrap();
        let ord = degeneracy_ordering(&g);
        let loc = find_local_coloring(&g, 1, 10).unwrap();
        let params = GraphParams::explicit(q, 1, alpha, seed).unwrap();
        let engine = GraphEngine::new(&g, &ord, &loc, params).unwrap();
        engine.run(seed).unwrap()
    }

    #[test]
    fn isolated_vertex_keeps_half_of_activated_colors() {
        // |S| ~ Binomial(1000, 0.1): mean 100, sd ≈ 9.5
        let mean = (0..200)
            .map(|s| isolated_run(1000, 0.2, s).trace.final_sizes[0] as f64)
            .sum::<f64>()
            / 200.0;
        assert!(
            (mean - 100.0).abs() < 4.0 * 9.49 / 200f64.sqrt(),
            "mean {mean}"
        );
    }

    #[test]
    fn same_seed_same_sets() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let ord = degeneracy_ordering(&g);
        let loc = find_local_coloring(&g, 1, 100).unwrap();
        let params = GraphParams::explicit(200, 1, 0.3, 1).unwrap();
        let engine = GraphEngine::new(&g, &ord, &loc, params).unwrap();
        let a = engine.run(9).unwrap();
        let b = engine.run(9).unwrap();
        assert_eq!(a.sets(), b.sets());
        assert!(a.color_sets(0.3).is_valid_for(&g));
    }

    #[test]
    fn rejects_wrong_local_coloring() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ord = degeneracy_ordering(&g);
        let loc = find_local_coloring(&g, 2, 100).unwrap();
        let params = GraphParams::explicit(10, 1, 0.3, 1).unwrap();
        assert!(matches!(
            GraphEngine::new(&g, &ord, &loc, params),
            Err(EngineError::Structure(_))
        ));
    }
}
