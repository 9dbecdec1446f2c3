//! Fractional coloring of d-degenerate r-uniform linear hypergraphs of
//! girth at least 4.
//!
//! Each color `c` joins `S(v_i)` with probability `p(v_i, c)`. For every
//! edge `e` in which `v_i` is internal, the weight of the right-most vertex
//! `v_k` is rescaled by the running conditional probability that `e` does
//! not kill `c` at `v_k`:
//!
//! * `X  = Π p(u, c)` over the internal vertices of `e` from `v_i` on,
//! * `X' = X / p(v_i, c)`,
//! * `c ∈ S(v_i)`: `p ← p·(1 − X')/(1 − X)`, otherwise `p ← p/(1 − X)`.
//!
//! Weights are kept inside `[α^{1+κ}, 1/2]`: leaving through the top pins
//! them at `1/2`, leaving through the bottom pins them at `α^{1+κ}`, with
//! equalizing coins `μ` and `ℓ` chosen so every weight stays a martingale.
//! When `v_i` is the last internal vertex `X' = 1`, so a color present at
//! every internal vertex is zeroed at `v_k` and no edge is monochromatic.

use serde::Serialize;

use crate::analysis::trace::RunTrace;
use crate::coins::{Coins, CounterCoins, DrawKey, DrawKind};
use crate::engine::{
    snapshot, Engine, EngineError, Mutation, RunOptions, RunOutput, RunStats, WeightMatrix,
    BAD_HIGH, BAD_LOW, SELECTED,
};
use crate::instances::{
    check_linear, check_triangle_free, DegeneracyOrdering, EdgeSet, Hypergraph,
};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperParams {
    pub q: usize,
    pub eps: f64,
    pub r: usize,
    pub d: usize,
    pub alpha: f64,
    pub kappa: f64,
    /// Lower threshold `α^{1+κ}`.
    pub lower: f64,
    pub seed: u64,
}

/// `(ln d / ((1 + εr/10)·r·(r−1)·d))^{1/(r−1)}` without domain checks.
pub fn alpha_hyper_formula(d: f64, r: f64, eps: f64) -> f64 {
    (d.ln() / ((1.0 + eps * r / 10.0) * r * (r - 1.0) * d)).powf(1.0 / (r - 1.0))
}

pub fn alpha_hyper(d: usize, r: usize, eps: f64) -> Result<f64, EngineError> {
    if d < 2 || r < 2 || !(eps > 0.0) {
        return Err(EngineError::Domain(format!(
            "alpha needs d >= 2, r >= 2, eps > 0 (got d={d}, r={r}, eps={eps})"
        )));
    }
    let alpha = alpha_hyper_formula(d as f64, r as f64, eps);
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(EngineError::Domain(format!(
            "alpha = {alpha} is not in (0, 1/2)"
        )));
    }
    Ok(alpha)
}

pub fn kappa(eps: f64, r: usize) -> f64 {
    eps / (1000.0 * r as f64)
}

/// Smallest `d' ≥ max(d, 2)` whose lower threshold `α^{1+κ}` is at most
/// 1/4, where the upper and lower threshold cases cannot meet. Using a
/// larger `d` than the degeneracy only lowers α.
pub fn exclusive_degeneracy(d: usize, r: usize, eps: f64) -> usize {
    let mut d = d.max(2);
    while alpha_hyper_formula(d as f64, r as f64, eps).powf(1.0 + kappa(eps, r)) > 0.25 {
        d += 1;
    }
    d
}

impl HyperParams {
    pub fn new(q: usize, eps: f64, r: usize, d: usize, seed: u64) -> Result<Self, EngineError> {
        let alpha = alpha_hyper(d, r, eps)?;
        let kappa = kappa(eps, r);
        let params = Self {
            q,
            eps,
            r,
            d,
            alpha,
            kappa,
            lower: alpha.powf(1.0 + kappa),
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    /// Explicit initial weight and lower threshold.
    pub fn explicit(
        q: usize,
        r: usize,
        alpha: f64,
        lower: f64,
        seed: u64,
    ) -> Result<Self, EngineError> {
        let params = Self {
            q,
            eps: 0.0,
            r,
            d: 0,
            alpha,
            kappa: 0.0,
            lower,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.q == 0 || self.r < 2 {
            return Err(EngineError::Domain("q >= 1 and r >= 2 required".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(EngineError::Domain(format!(
                "initial weight {} is not in (0, 1/2]",
                self.alpha
            )));
        }
        if !(self.lower > 0.0 && self.lower <= self.alpha) {
            return Err(EngineError::Domain(format!(
                "lower threshold {} is not in (0, alpha]",
                self.lower
            )));
        }
        Ok(())
    }
}

/// The quantities attached to one (edge, processed vertex, color) update.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeContext<W> {
    pub k: usize,
    /// Vertices of the edge processed before `v_i`.
    pub f: Vec<usize>,
    pub x: W,
    /// `X / p(v_i, c)`; `None` when `p(v_i, c) = 0` (activation impossible).
    pub x_prime: Option<W>,
}

/// Builds the update context for edge `edge` at vertex `vi` and color `c`.
/// `vi` must be an internal (not right-most) vertex of the edge.
pub fn edge_context<W: Weight>(
    edge: &[usize],
    ordering: &DegeneracyOrdering,
    vi: usize,
    state: &WeightMatrix<W>,
    c: usize,
) -> Option<EdgeContext<W>> {
    let k = *edge.iter().max_by_key(|&&u| ordering.position[u])?;
    if k == vi || !edge.contains(&vi) {
        return None;
    }
    let f: Vec<usize> = edge
        .iter()
        .copied()
        .filter(|&u| ordering.precedes(u, vi))
        .collect();
    let pi = state.weight(vi, c).clone();
    if pi.is_zero() {
        return Some(EdgeContext {
            k,
            f,
            x: W::zero(),
            x_prime: None,
        });
    }
    let x_prime = edge
        .iter()
        .filter(|&&u| u != vi && u != k && ordering.precedes(vi, u))
        .fold(W::one(), |acc, &u| acc * state.weight(u, c).clone());
    Some(EdgeContext {
        k,
        f,
        x: pi * x_prime.clone(),
        x_prime: Some(x_prime),
    })
}

fn pin_prob<W: Weight>(x: &W, x_prime: &W, pi: &W, pk: &W) -> W {
    let one = W::one();
    let two = W::from_usize(2);
    let open = one.clone() - x.clone();
    ((one.clone() - pi.clone()) / pi.clone())
        * ((two.clone() * pk.clone() - open.clone())
            / (open - two * (one - x_prime.clone()) * pk.clone()))
}

fn keep_prob<W: Weight>(x: &W, pi: &W, pk: &W, lower: &W) -> W {
    let one = W::one();
    ((one.clone() - x.clone()) / (one.clone() - pi.clone()))
        * (one - lower.clone() * pi.clone() / pk.clone())
}

/// `μ`, the probability of pinning at 1/2 when `c ∈ S(v_i)` and the weight
/// is above `(1 − X)/2`.
pub fn pin_probability_hyper(x: f64, x_prime: f64, pi: f64, pk: f64) -> Result<f64, EngineError> {
    if !(pi > 0.0 && pi < 1.0) || 2.0 * pk < 1.0 - x {
        return Err(EngineError::Domain(format!(
            "mu needs 0 < p_i < 1 and p_k >= (1-X)/2 (p_i={pi}, p_k={pk}, X={x})"
        )));
    }
    Ok(pin_prob(&x, &x_prime, &pi, &pk))
}

/// `ℓ`, the probability of keeping the rescaled weight when `c ∉ S(v_i)`
/// and the weight would fall below the lower threshold.
pub fn keep_probability_hyper(
    x: f64,
    x_prime: f64,
    pi: f64,
    pk: f64,
    lower: f64,
) -> Result<f64, EngineError> {
    let slack = pk * (1.0 - x_prime);
    if !(pi < 1.0 && pk > 0.0) || !(slack > 0.0 && slack <= (1.0 - x) * lower) {
        return Err(EngineError::Domain(format!(
            "ell needs 0 < p_k(1-X') <= (1-X)·lower (p_k={pk}, X={x}, X'={x_prime})"
        )));
    }
    Ok(keep_prob(&x, &pi, &pk, &lower))
}

/// Both equalizer probabilities for a context; each is `None` when its
/// threshold is not violated. Fails when both are.
pub fn equalizer_probs_hyper(
    ctx: &EdgeContext<f64>,
    pi: f64,
    pk: f64,
    alpha: f64,
    kappa: f64,
) -> Result<(Option<f64>, Option<f64>), EngineError> {
    let Some(xp) = ctx.x_prime else {
        return Ok((None, None));
    };
    let lower = alpha.powf(1.0 + kappa);
    let upper_hit = 2.0 * pk > 1.0 - ctx.x;
    let slack = pk * (1.0 - xp);
    let lower_hit = slack > 0.0 && slack < (1.0 - ctx.x) * lower;
    if upper_hit && lower_hit {
        return Err(EngineError::Domain(
            "both thresholds violated at once".into(),
        ));
    }
    Ok((
        upper_hit.then(|| pin_prob(&ctx.x, &xp, &pi, &pk)),
        lower_hit.then(|| keep_prob(&ctx.x, &pi, &pk, &lower)),
    ))
}

#[derive(Debug, Clone)]
struct InternalEdge {
    k: usize,
    before: Vec<usize>,
    after: Vec<usize>,
}

pub struct HyperEngine<'a> {
    hypergraph: &'a Hypergraph,
    ordering: &'a DegeneracyOrdering,
    params: HyperParams,
    options: RunOptions,
    /// Edges in which each vertex is internal, by edge index.
    internal: Vec<Vec<InternalEdge>>,
}

impl<'a> HyperEngine<'a> {
    pub fn new(
        hypergraph: &'a Hypergraph,
        ordering: &'a DegeneracyOrdering,
        params: HyperParams,
    ) -> Result<Self, EngineError> {
        params.validate()?;
        if params.r != hypergraph.r() {
            return Err(EngineError::Structure(format!(
                "parameters say r = {}, hypergraph is {}-uniform",
                params.r,
                hypergraph.r()
            )));
        }
        if ordering.len() != hypergraph.n() {
            return Err(EngineError::Structure(
                "ordering does not match the hypergraph".into(),
            ));
        }
        let lin = check_linear(hypergraph);
        if let Some((a, b)) = lin.violation {
            return Err(EngineError::Structure(format!(
                "hypergraph is not linear: edges {a} and {b} share two vertices"
            )));
        }
        if let Some(t) = check_triangle_free(hypergraph).triangle {
            return Err(EngineError::Structure(format!(
                "girth below 4: edges {:?} form a triangle",
                t.edges
            )));
        }
        let mut internal: Vec<Vec<InternalEdge>> = vec![Vec::new(); hypergraph.n()];
        for e in hypergraph.edges() {
            let mut members = e.clone();
            members.sort_by_key(|&u| ordering.position[u]);
            let k = *members.last().expect("nonempty edge");
            let inner = &members[..members.len() - 1];
            for (t, &v) in inner.iter().enumerate() {
                internal[v].push(InternalEdge {
                    k,
                    before: inner[..t].to_vec(),
                    after: inner[t + 1..].to_vec(),
                });
            }
        }
        for (v, list) in internal.iter().enumerate() {
            let mut ks: Vec<usize> = list.iter().map(|e| e.k).collect();
            ks.sort_unstable();
            if ks.windows(2).any(|w| w[0] == w[1]) {
                return Err(EngineError::Structure(format!(
                    "vertex {v} reaches one right-most vertex through two edges"
                )));
            }
        }
        Ok(Self {
            hypergraph,
            ordering,
            params,
            options: RunOptions::default(),
            internal,
        })
    }

    pub fn with_options(mut self, options: RunOptions) -> Self {
        self.options = options;
        self
    }

    pub fn ordering(&self) -> &DegeneracyOrdering {
        self.ordering
    }

    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn run_generic<W: Weight, C: Coins<W>>(
        &self,
        q: usize,
        init: W,
        lower: W,
        coins: &mut C,
    ) -> Result<RunOutput<W>, EngineError> {
        let n = self.hypergraph.n();
        self.run_from(WeightMatrix::filled(n, q, init), lower, coins)
    }

    /// Runs from an arbitrary starting weight matrix (all flags clear).
    pub fn run_from<W: Weight, C: Coins<W>>(
        &self,
        mut state: WeightMatrix<W>,
        lower: W,
        coins: &mut C,
    ) -> Result<RunOutput<W>, EngineError> {
        let n = self.hypergraph.n();
        let q = state.q;
        let check = self.options.check_invariants;
        let mutation = self.options.mutation;
        let mut stats = RunStats::default();
        let mut trace = RunTrace::new(self.options.watch.clone());

        let one = W::one();
        let half = W::half();
        let two = W::from_usize(2);
        let zero = W::zero();

        snapshot(&mut trace, &state, &self.ordering.position, 0);
        for (step, &v) in self.ordering.order.iter().enumerate() {
            let mut edges: Vec<&InternalEdge> = self.internal[v].iter().collect();
            if self.options.reverse_edge_order {
                edges.reverse();
            }
            for c in 0..q {
                let iv = state.idx(v, c);
                if state.flags[iv] & (BAD_HIGH | BAD_LOW) != 0 {
                    continue;
                }
                let pv = state.p[iv].clone();
                if pv.is_zero() {
                    stats.carried += edges.len() as u64;
                    continue;
                }
                let active = coins.flip(&pv, DrawKey::new(step, c, DrawKind::Activation, 0));
                if active {
                    state.flags[iv] |= SELECTED;
                }
                for edge in &edges {
                    let k = edge.k;
                    let ik = state.idx(k, c);
                    if edge.before.iter().any(|&u| !state.has(u, c, SELECTED))
                        || state.flags[ik] & (BAD_HIGH | BAD_LOW) != 0
                        || state.p[ik].is_zero()
                    {
                        stats.carried += 1;
                        continue;
                    }
                    let pk = state.p[ik].clone();
                    let x_prime = edge
                        .after
                        .iter()
                        .fold(one.clone(), |acc, &u| acc * state.weight(u, c).clone());
                    let x = pv.clone() * x_prime.clone();
                    if check && x > x_prime {
                        stats.violation(|| format!("X > X' at step {step}, color {c}"));
                    }
                    let open = one.clone() - x.clone();
                    let slack = pk.clone() * (one.clone() - x_prime.clone());
                    let floor = open.clone() * lower.clone();
                    let upper_hit = two.clone() * pk.clone() > open;
                    let at_upper = two.clone() * pk.clone() == open;
                    let lower_hit = slack > zero && slack < floor;
                    let at_lower = slack > zero && slack == floor;
                    if upper_hit && lower_hit {
                        return Err(EngineError::Regime {
                            step,
                            vertex: k,
                            color: c,
                        });
                    }

                    enum Next<W> {
                        High,
                        Low,
                        Set(W),
                    }
                    let next = if upper_hit {
                        stats.upper_case += 1;
                        if active {
                            let mu = match mutation {
                                Mutation::NoPinEqualizer => zero.clone(),
                                _ => pin_prob(&x, &x_prime, &pv, &pk),
                            };
                            if coins.flip(&mu, DrawKey::new(step, c, DrawKind::Pin, k)) {
                                Next::High
                            } else if at_lower {
                                Next::Low
                            } else {
                                Next::Set(slack / open)
                            }
                        } else {
                            Next::High
                        }
                    } else if lower_hit {
                        stats.lower_case += 1;
                        if active {
                            Next::Low
                        } else {
                            let ell = match mutation {
                                Mutation::NoKeepEqualizer => one.clone(),
                                _ => keep_prob(&x, &pv, &pk, &lower),
                            };
                            if coins.flip(&ell, DrawKey::new(step, c, DrawKind::Keep, k)) {
                                if at_upper {
                                    Next::High
                                } else {
                                    Next::Set(pk / open)
                                }
                            } else {
                                Next::Set(zero.clone())
                            }
                        }
                    } else {
                        stats.main_case += 1;
                        if active {
                            if at_lower {
                                Next::Low
                            } else {
                                Next::Set(slack / open)
                            }
                        } else if at_upper {
                            Next::High
                        } else {
                            Next::Set(pk / open)
                        }
                    };
                    match next {
                        Next::High => {
                            state.p[ik] = half.clone();
                            state.flags[ik] |= BAD_HIGH;
                            stats.pinned_high += 1;
                        }
                        Next::Low => {
                            state.p[ik] = lower.clone();
                            state.flags[ik] |= BAD_LOW;
                            stats.pinned_low += 1;
                        }
                        Next::Set(w) => state.p[ik] = w,
                    }
                    if check {
                        let w = &state.p[ik];
                        if !w.is_zero() && (*w < lower || *w > half) {
                            stats.violation(|| {
                                format!(
                                    "weight {w:?} of vertex {k}, color {c} outside [lower, 1/2]"
                                )
                            });
                        }
                    }
                }
            }
            snapshot(&mut trace, &state, &self.ordering.position, step + 1);
        }
        trace.final_sizes = (0..n).map(|v| state.selected(v).len()).collect();
        Ok(RunOutput {
            state,
            stats,
            trace,
        })
    }
}

impl Engine for HyperEngine<'_> {
    fn instance(&self) -> &dyn EdgeSet {
        self.hypergraph
    }

    fn q(&self) -> usize {
        self.params.q
    }

    fn initial_weight(&self) -> f64 {
        self.params.alpha
    }

    fn run_with(&self, q: usize, seed: u64) -> Result<RunOutput<f64>, EngineError> {
        let mut coins = CounterCoins::new(seed);
        self.run_generic(q, self.params.alpha, self.params.lower, &mut coins)
    }

    fn params_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.params).expect("params serialize");
        v["mode"] = "hyper".into();
        v
    }
}
