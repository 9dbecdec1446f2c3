//! Seeded generators for the three instance families.
//!
//! Every generator adds vertices one at a time and only ever connects a new
//! vertex to earlier ones, so the creation order has left-degree at most
//! `d` and the defining property is checked locally before an edge is
//! accepted. Outputs are re-certified by the validators in tests.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coins::derive_seed;
use crate::instances::{
    check_linear, check_triangle_free, degeneracy_ordering, find_local_coloring, Graph, Hypergraph,
    LocalColoring,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    /// Target vertex count.
    pub n: usize,
    /// Left-degree bound per new vertex.
    pub d: usize,
    /// Uniformity (hypergraphs) or clique size (locally r-colorable graphs).
    pub r: usize,
    pub seed: u64,
    /// Rejected samples allowed per vertex before giving up on it.
    pub max_retries: usize,
}

impl GenSpec {
    pub const DEFAULT_RETRIES: usize = 2000;

    pub fn new(n: usize, d: usize, r: usize, seed: u64) -> Self {
        Self {
            n,
            d,
            r,
            seed,
            max_retries: Self::DEFAULT_RETRIES,
        }
    }

    fn validate(&self, min_r: usize) -> Result<(), GenError> {
        if self.n == 0 || self.d == 0 || self.max_retries == 0 {
            return Err(GenError::InvalidSpec(
                "n, d and max_retries must be at least 1".into(),
            ));
        }
        if self.r < min_r {
            return Err(GenError::InvalidSpec(format!(
                "r must be at least {min_r}, got {}",
                self.r
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("generator stalled at vertex {vertex} ({attempts} rejected samples)")]
    RetryExhausted { vertex: usize, attempts: usize },
}

/// Sampling effort spent by a generator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenStats {
    pub samples: u64,
    pub rejections: u64,
    /// Whole-instance restarts (locally r-colorable family only).
    pub restarts: u64,
}

/// Triangle-free graph in which vertex `v` picks up to `d` earlier
/// neighbors forming an independent set.
pub fn gen_triangle_free_degenerate(spec: &GenSpec) -> Result<(Graph, GenStats), GenError> {
    spec.validate(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); spec.n];
    let mut edges = Vec::new();
    let mut stats = GenStats::default();
    for v in 1..spec.n {
        let target = spec.d.min(v);
        let mut chosen: Vec<usize> = Vec::with_capacity(target);
        let mut rejected = 0;
        while chosen.len() < target && rejected < spec.max_retries {
            let u = rng.gen_range(0..v);
            stats.samples += 1;
            if chosen.contains(&u) || chosen.iter().any(|w| adj[u].contains(w)) {
                rejected += 1;
                stats.rejections += 1;
                continue;
            }
            chosen.push(u);
        }
        for u in chosen {
            adj[u].insert(v);
            adj[v].insert(u);
            edges.push((u, v));
        }
    }
    let graph = Graph::new(spec.n, &edges).expect("generated edges are in range");
    Ok((graph, stats))
}

/// Budget for the local-coloring search used to re-certify blow-ups.
pub const LOCAL_SEARCH_BUDGET: u64 = 1 << 22;

/// Cartesian product of a triangle-free base with `K_r`: base vertex `b`
/// becomes the clique `{b·r + t : t < r}`, and for each base edge `bb'` the
/// copies with equal position `t` are joined. A neighborhood is then one
/// `K_{r−1}` plus an independent set, and positions give a local
/// `r`-coloring. The base has `⌈n/r⌉` vertices.
pub fn gen_locally_r_colorable(
    spec: &GenSpec,
) -> Result<(Graph, LocalColoring, GenStats), GenError> {
    spec.validate(1)?;
    let r = spec.r;
    let mut total = GenStats::default();
    for attempt in 0..spec.max_retries as u64 {
        let base_spec = GenSpec {
            n: spec.n.div_ceil(r),
            seed: if attempt == 0 {
                spec.seed
            } else {
                derive_seed(spec.seed, attempt)
            },
            ..spec.clone()
        };
        let (base, stats) = gen_triangle_free_degenerate(&base_spec)?;
        total.samples += stats.samples;
        total.rejections += stats.rejections;
        let n = base.n() * r;
        let mut edges = Vec::new();
        for b in 0..base.n() {
            for t in 0..r {
                for t2 in t + 1..r {
                    edges.push((b * r + t, b * r + t2));
                }
            }
        }
        for &[a, b] in base.edges() {
            for t in 0..r {
                edges.push((a * r + t, b * r + t));
            }
        }
        let graph = Graph::new(n, &edges).expect("blow-up edges are in range");
        let local = LocalColoring {
            r,
            classes: (0..n)
                .map(|v| graph.neighbors(v).iter().map(|&u| (u % r) as u32).collect())
                .collect(),
        };
        if local.verify(&graph).is_ok()
            && find_local_coloring(&graph, r, LOCAL_SEARCH_BUDGET).is_ok()
        {
            return Ok((graph, local, total));
        }
        log::warn!("blow-up attempt {attempt} failed local-coloring validation, retrying");
        total.restarts += 1;
    }
    Err(GenError::RetryExhausted {
        vertex: 0,
        attempts: spec.max_retries,
    })
}

/// Consecutive vertices allowed to place no edge before the hypergraph
/// generator reports that it is stuck.
pub const STALL_LIMIT: usize = 32;

/// Linear `r`-uniform hypergraph of girth at least 4. Each new vertex `v`
/// tries to close up to `d` edges with `r − 1` earlier vertices; an edge is
/// rejected if two of its vertices already share an edge, or already have
/// a common neighbor (which would close a triangle).
pub fn gen_linear_girth4_hypergraph(spec: &GenSpec) -> Result<(Hypergraph, GenStats), GenError> {
    spec.validate(2)?;
    let r = spec.r;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); spec.n];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut stats = GenStats::default();
    let common = |adj: &[HashSet<usize>], a: usize, b: usize| {
        let (small, large) = if adj[a].len() <= adj[b].len() {
            (&adj[a], &adj[b])
        } else {
            (&adj[b], &adj[a])
        };
        small.iter().any(|x| large.contains(x))
    };
    let mut stalled = 0;
    for v in (r - 1)..spec.n {
        let mut placed = 0;
        let mut rejected = 0;
        while placed < spec.d && rejected < spec.max_retries {
            let mut e: Vec<usize> = sample(&mut rng, v, r - 1).into_iter().collect();
            e.push(v);
            stats.samples += 1;
            let bad = (0..r)
                .any(|i| (i + 1..r).any(|j| adj[e[i]].contains(&e[j]) || common(&adj, e[i], e[j])));
            if bad {
                rejected += 1;
                stats.rejections += 1;
                continue;
            }
            for &a in &e {
                for &b in &e {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
            e.sort_unstable();
            edges.push(e);
            placed += 1;
        }
        if placed == 0 {
            stalled += 1;
            if stalled >= STALL_LIMIT {
                return Err(GenError::RetryExhausted {
                    vertex: v,
                    attempts: rejected,
                });
            }
        } else {
            stalled = 0;
        }
    }
    let h = Hypergraph::new(spec.n, r, &edges).expect("generated edges are well formed");
    Ok((h, stats))
}

/// JSON sidecar written next to a generated instance.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub family: String,
    pub spec: GenSpec,
    pub n: usize,
    pub edges: usize,
    pub degeneracy: usize,
    pub degeneracy_bound: usize,
    pub validators: BTreeMap<String, bool>,
    pub stats: GenStats,
}

impl Sidecar {
    pub fn for_graph(
        family: &str,
        spec: &GenSpec,
        graph: &Graph,
        local: Option<&LocalColoring>,
        stats: GenStats,
    ) -> Self {
        let mut validators = BTreeMap::new();
        let bound = match local {
            Some(loc) => {
                validators.insert("local_coloring".into(), loc.verify(graph).is_ok());
                spec.r * spec.d + spec.r - 1
            }
            None => {
                validators.insert("triangle_free".into(), graph.find_triangle().is_none());
                spec.d
            }
        };
        Self {
            family: family.into(),
            spec: spec.clone(),
            n: graph.n(),
            edges: graph.m(),
            degeneracy: degeneracy_ordering(graph).d,
            degeneracy_bound: bound,
            validators,
            stats,
        }
    }

    pub fn for_hypergraph(family: &str, spec: &GenSpec, h: &Hypergraph, stats: GenStats) -> Self {
        let mut validators = BTreeMap::new();
        validators.insert("linear".into(), check_linear(h).ok);
        validators.insert("triangle_free".into(), check_triangle_free(h).ok);
        Self {
            family: family.into(),
            spec: spec.clone(),
            n: h.n(),
            edges: h.m(),
            degeneracy: degeneracy_ordering(h).d,
            degeneracy_bound: spec.d,
            validators,
            stats,
        }
    }

    pub fn all_valid(&self) -> bool {
        self.validators.values().all(|&ok| ok) && self.degeneracy <= self.degeneracy_bound
    }
}
