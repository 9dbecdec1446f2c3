//! Exact outcome-tree enumeration with rational weights.
//!
//! With `q = 1` every run of an engine is a finite sequence of draws. The
//! oracle replays the real engine code over [`BigRational`] weights with a
//! scripted coin source that walks the whole tree depth first, weighting
//! each leaf by the product of its branch probabilities. Deterministic
//! draws (`p = 0`, `p = 1`, `r = 1`) do not branch.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coins::{Coins, DrawKey};
use crate::colorsets::ColorSets;
use crate::engine::{Engine, EngineError, Mutation, RunOptions, RunOutput};
use crate::graph_engine::{GraphEngine, GraphParams};
use crate::hyper_engine::{HyperEngine, HyperParams};
use crate::instances::io::Instance;
use crate::instances::{
    degeneracy_ordering, find_local_coloring, DegeneracyOrdering, EdgeSet, Graph, Hypergraph,
};
use crate::weight::format_rational;

fn approx(x: &BigRational) -> f64 {
    crate::weight::Weight::to_f64(x)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance has {n} vertices and {m} edges; the oracle limit is {max_n} and {max_m}")]
    TooLarge {
        n: usize,
        m: usize,
        max_n: usize,
        max_m: usize,
    },
    #[error("outcome tree has more than {0} leaves")]
    TooManyBranches(u64),
    #[error("{0}")]
    BadWeight(String),
    #[error("draw {0:?} was requested twice on one path")]
    RepeatedDraw(DrawKey),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_edges: usize,
    pub max_branches: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_n: 5,
            max_edges: 6,
            max_branches: 1 << 20,
        }
    }
}

/// Which engine to enumerate, with its rational thresholds.
pub enum OracleMode<'e, 'a> {
    Graph(&'e GraphEngine<'a>),
    Hyper {
        engine: &'e HyperEngine<'a>,
        lower: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub mode: &'static str,
    pub p0: BigRational,
    pub order: Vec<usize>,
    /// Per vertex `E[p_{k-1}(v_k, c)]` for the single color.
    pub expectations: Vec<BigRational>,
    /// Probability that every edge has an empty common intersection.
    pub validity: BigRational,
    /// Sum of all leaf probabilities (1 unless the enumeration is broken).
    pub total_probability: BigRational,
    pub branches: u64,
    /// Leaves on which some weight was pinned high or low.
    pub pinned_branches: u64,
}

impl OracleResult {
    /// Vertices whose expectation differs from `p0`.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.expectations.len())
            .filter(|&v| self.expectations[v] != self.p0)
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.mismatches().is_empty() && self.validity.is_one() && self.total_probability.is_one()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            mode: &'a str,
            p0: String,
            order: &'a [usize],
            expectations: Vec<String>,
            validity: String,
            total_probability: String,
            branches: u64,
            pinned_branches: u64,
            exact: bool,
        }
        serde_json::to_value(Out {
            mode: self.mode,
            p0: format_rational(&self.p0),
            order: &self.order,
            expectations: self.expectations.iter().map(format_rational).collect(),
            validity: format_rational(&self.validity),
            total_probability: format_rational(&self.total_probability),
            branches: self.branches,
            pinned_branches: self.pinned_branches,
            exact: self.is_exact(),
        })
        .expect("oracle result serializes")
    }
}

/// Depth-first walker over the outcome tree. `script` holds the choice
/// and arity of every branching draw on the current path.
struct Walker {
    script: Vec<(usize, usize)>,
    pos: usize,
    prob: BigRational,
    seen: HashSet<DrawKey>,
    fault: Option<OracleError>,
}

impl Walker {
    fn new() -> Self {
        Self {
            script: Vec::new(),
            pos: 0,
            prob: BigRational::one(),
            seen: HashSet::new(),
            fault: None,
        }
    }

    fn start_path(&mut self) {
        self.pos = 0;
        self.prob = BigRational::one();
        self.seen.clear();
    }

    fn take(&mut self, arity: usize) -> usize {
        if self.pos == self.script.len() {
            self.script.push((0, arity));
        }
        let choice = self.script[self.pos].0;
        self.pos += 1;
        choice
    }

    /// Moves to the next leaf; false once the tree is exhausted.
    fn advance(&mut self) -> bool {
        self.script.truncate(self.pos);
        while let Some((choice, arity)) = self.script.pop() {
            if choice + 1 < arity {
                self.script.push((choice + 1, arity));
                return true;
            }
        }
        false
    }

    fn note(&mut self, key: DrawKey) {
        if !self.seen.insert(key) && self.fault.is_none() {
            self.fault = Some(OracleError::RepeatedDraw(key));
        }
    }
}

impl Coins<BigRational> for Walker {
    fn flip(&mut self, p: &BigRational, key: DrawKey) -> bool {
        self.note(key);
        if *p < BigRational::zero() || *p > BigRational::one() {
            if self.fault.is_none() {
                self.fault = Some(OracleError::BadWeight(format!(
                    "draw {key:?} has probability {}",
                    format_rational(p)
                )));
            }
            return false;
        }
        if p.is_zero() {
            return false;
        }
        if p.is_one() {
            return true;
        }
        if self.take(2) == 0 {
            self.prob = &self.prob * p;
            true
        } else {
            self.prob = &self.prob * (BigRational::one() - p);
            false
        }
    }

    fn class(&mut self, r: usize, key: DrawKey) -> usize {
        self.note(key);
        if r <= 1 {
            return 0;
        }
        let choice = self.take(r);
        self.prob = &self.prob / BigRational::from_integer(r.into());
        choice
    }
}

fn check_size(instance: &dyn EdgeSet, limits: &OracleLimits) -> Result<(), OracleError> {
    let (n, m) = (instance.vertex_count(), instance.edge_count());
    if n > limits.max_n || m > limits.max_edges {
        return Err(OracleError::TooLarge {
            n,
            m,
            max_n: limits.max_n,
            max_m: limits.max_edges,
        });
    }
    Ok(())
}

fn unit_interval(p0: &BigRational, max: BigRational, what: &str) -> Result<(), OracleError> {
    if *p0 <= BigRational::zero() || *p0 > max {
        return Err(OracleError::BadWeight(format!(
            "{what} {} is out of range (0, {}]",
            format_rational(p0),
            format_rational(&max)
        )));
    }
    Ok(())
}

/// Enumerates the full outcome tree of one engine at `q = 1` with initial
/// weight `p0`.
pub fn exact_oracle(
    mode: OracleMode<'_, '_>,
    p0: &BigRational,
    limits: OracleLimits,
) -> Result<OracleResult, OracleError> {
    let (instance, order, label): (&dyn EdgeSet, Vec<usize>, &'static str) = match &mode {
        OracleMode::Graph(e) => {
            unit_interval(p0, BigRational::one(), "initial weight")?;
            (Engine::instance(*e), e.ordering().order.clone(), "graph")
        }
        OracleMode::Hyper { engine, lower } => {
            unit_interval(
                p0,
                BigRational::one() / BigRational::from_integer(2.into()),
                "initial weight",
            )?;
            unit_interval(lower, p0.clone(), "lower threshold")?;
            (
                Engine::instance(*engine),
                engine.ordering().order.clone(),
                "hyper",
            )
        }
    };
    check_size(instance, &limits)?;
    let n = instance.vertex_count();
    let alpha = approx(p0);

    let mut walker = Walker::new();
    let mut expectations = vec![BigRational::zero(); n];
    let mut validity = BigRational::zero();
    let mut total = BigRational::zero();
    let mut branches = 0u64;
    let mut pinned_branches = 0u64;
    loop {
        walker.start_path();
        let out: RunOutput<BigRational> = match &mode {
            OracleMode::Graph(e) => e.run_generic(1, p0.clone(), &mut walker),
            OracleMode::Hyper { engine, lower } => {
                engine.run_generic(1, p0.clone(), lower.clone(), &mut walker)?
            }
        };
        if let Some(fault) = walker.fault.take() {
            return Err(fault);
        }
        branches += 1;
        if branches > limits.max_branches {
            return Err(OracleError::TooManyBranches(limits.max_branches));
        }
        let prob = walker.prob.clone();
        for (v, acc) in expectations.iter_mut().enumerate() {
            *acc += &prob * out.weight_at_processing(v, 0);
        }
        if ColorSets::new(1, alpha, out.sets()).is_valid_for(instance) {
            validity += &prob;
        }
        if out.stats.pinned_high + out.stats.pinned_low > 0 {
            pinned_branches += 1;
        }
        total += prob;
        if !walker.advance() {
            break;
        }
    }
    Ok(OracleResult {
        mode: label,
        p0: p0.clone(),
        order,
        expectations,
        validity,
        total_probability: total,
        branches,
        pinned_branches,
    })
}

/// Default rational lower threshold for hypergraph oracle runs: `9·p0/10`.
pub fn default_lower(p0: &BigRational) -> BigRational {
    p0 * BigRational::new(9.into(), 10.into())
}

/// Builds the engine for `instance` and runs the oracle.
///
/// `order` defaults to the degeneracy ordering; `r` is the local-coloring
/// class count for graphs (a coloring is searched for) and is ignored for
/// hypergraphs; `lower` defaults to [`default_lower`].
pub fn exact_oracle_on(
    instance: &Instance,
    order: Option<Vec<usize>>,
    r: usize,
    p0: &BigRational,
    lower: Option<&BigRational>,
    mutation: Mutation,
    limits: OracleLimits,
) -> Result<OracleResult, OracleError> {
    let structure = |e: String| OracleError::Structure(e);
    let options = RunOptions {
        check_invariants: true,
        mutation,
        ..RunOptions::default()
    };
    let half = BigRational::new(1.into(), 2.into());
    match instance {
        Instance::Graph(g) => {
            unit_interval(p0, BigRational::new(1.into(), 1.into()), "initial weight")?;
            check_size(g, &limits)?;
            let ord = ordering_for(g, order)?;
            let local = find_local_coloring(g, r, 1 << 20).map_err(|e| structure(e.to_string()))?;
            let params = GraphParams::explicit(1, r, approx(p0), 0)?;
            let engine = GraphEngine::new(g, &ord, &local, params)?.with_options(options);
            exact_oracle(OracleMode::Graph(&engine), p0, limits)
        }
        Instance::Hyper(h) => {
            unit_interval(p0, half, "initial weight")?;
            check_size(h, &limits)?;
            let ord = ordering_for(h, order)?;
            let lower = lower.cloned().unwrap_or_else(|| default_lower(p0));
            let params = HyperParams::explicit(1, h.r(), approx(p0), approx(&lower), 0)?;
            let engine = HyperEngine::new(h, &ord, params)?.with_options(options);
            exact_oracle(
                OracleMode::Hyper {
                    engine: &engine,
                    lower,
                },
                p0,
                limits,
            )
        }
    }
}

fn ordering_for<E: EdgeSet>(
    instance: &E,
    order: Option<Vec<usize>>,
) -> Result<DegeneracyOrdering, OracleError> {
    match order {
        Some(o) => DegeneracyOrdering::from_order(instance, o)
            .map_err(|e| OracleError::Structure(e.to_string())),
        None => Ok(degeneracy_ordering(instance)),
    }
}

/// A small named instance with the local-coloring class counts it admits.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub instance: Instance,
    /// Class counts to try for graphs; empty for hypergraphs.
    pub classes: Vec<usize>,
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).expect("catalog graph")
}

fn hyper(n: usize, r: usize, edges: &[Vec<usize>]) -> Hypergraph {
    Hypergraph::new(n, r, edges).expect("catalog hypergraph")
}

/// The fixed catalog: edgeless, K2, P3, K3 for graphs, and the edgeless,
/// single-edge and two-intersecting-edge hypergraphs for `r ∈ {2, 3}`.
pub fn catalog() -> Vec<CatalogEntry> {
    let g = |name: &str, instance: Graph, classes: Vec<usize>| CatalogEntry {
        name: name.into(),
        instance: Instance::Graph(instance),
        classes,
    };
    let h = |name: &str, instance: Hypergraph| CatalogEntry {
        name: name.into(),
        instance: Instance::Hyper(instance),
        classes: Vec::new(),
    };
    vec![
        g("graph-edgeless", graph(3, &[]), vec![1, 2]),
        g("graph-k2", graph(2, &[(0, 1)]), vec![1, 2]),
        g("graph-p3", graph(3, &[(0, 1), (1, 2)]), vec![1, 2]),
        g("graph-k3", graph(3, &[(0, 1), (1, 2), (0, 2)]), vec![2]),
        h("hyper-edgeless-r3", hyper(3, 3, &[])),
        h("hyper-edge-r2", hyper(2, 2, &[vec![0, 1]])),
        h("hyper-edge-r3", hyper(3, 3, &[vec![0, 1, 2]])),
        h("hyper-two-edges-r2", hyper(3, 2, &[vec![0, 1], vec![1, 2]])),
        h(
            "hyper-two-edges-r3",
            hyper(5, 3, &[vec![0, 1, 2], vec![2, 3, 4]]),
        ),
    ]
}

/// An instance on which removing one equalizing coin breaks the exact
/// expectation.
#[derive(Debug, Clone)]
pub struct Witness {
    pub name: &'static str,
    pub mutation: Mutation,
    pub instance: Instance,
    pub order: Vec<usize>,
    pub r: usize,
    pub p0: BigRational,
    pub lower: Option<BigRational>,
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// One witness per equalizer:
///
/// * graph μ: star with two leaves processed before the center, `r = 1`,
///   `p0 = 3/10`; the first leaf can double the center to `3/5`, so the
///   second leaf meets the upper case;
/// * hypergraph μ: 2-uniform star with three leaves before the center,
///   `p0 = 1/4`; two unactivated leaves lift the center to `4/9 > 3/8`;
/// * hypergraph ℓ: one 3-edge, `p0 = 1/4`, lower threshold `9/40`; the
///   first vertex already sees `p(1 − X') = 3/16 < (15/16)·(9/40)`.
pub fn mutation_witnesses() -> Vec<Witness> {
    vec![
        Witness {
            name: "graph-star-mu",
            mutation: Mutation::NoPinEqualizer,
            instance: Instance::Graph(graph(3, &[(0, 2), (1, 2)])),
            order: vec![0, 1, 2],
            r: 1,
            p0: ratio(3, 10),
            lower: None,
        },
        Witness {
            name: "hyper-star-mu",
            mutation: Mutation::NoPinEqualizer,
            instance: Instance::Hyper(hyper(4, 2, &[vec![0, 3], vec![1, 3], vec![2, 3]])),
            order: vec![0, 1, 2, 3],
            r: 2,
            p0: ratio(1, 4),
            lower: None,
        },
        Witness {
            name: "hyper-edge-ell",
            mutation: Mutation::NoKeepEqualizer,
            instance: Instance::Hyper(hyper(3, 3, &[vec![0, 1, 2]])),
            order: vec![0, 1, 2],
            r: 3,
            p0: ratio(1, 4),
            lower: Some(ratio(9, 40)),
        },
    ]
}

impl Witness {
    pub fn run(&self, mutation: Mutation) -> Result<OracleResult, OracleError> {
        exact_oracle_on(
            &self.instance,
            Some(self.order.clone()),
            self.r,
            &self.p0,
            self.lower.as_ref(),
            mutation,
            OracleLimits::default(),
        )
    }
}
