//! State, options and outputs shared by both coloring engines.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::trace::{RunTrace, TraceRow};
use crate::colorsets::ColorSets;
use crate::instances::EdgeSet;
use crate::weight::Weight;

pub const BAD_HIGH: u8 = 1;
pub const BAD_LOW: u8 = 2;
pub const SELECTED: u8 = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("instance precondition failed: {0}")]
    Structure(String),
    #[error(
        "weight at step {step}, vertex {vertex}, color {color} violates both thresholds; \
         the parameters are outside the regime where the upper and lower cases exclude each other"
    )]
    Regime {
        step: usize,
        vertex: usize,
        color: usize,
    },
}

/// Deliberate defects used to show the verification harness notices when
/// an equalizing coin is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Mutation {
    #[default]
    None,
    /// Treat μ as 0: the upper-threshold coin never pins.
    NoPinEqualizer,
    /// Treat ℓ as 1: the lower-threshold coin never drops to 0.
    NoKeepEqualizer,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Vertices whose potential, entropy and bad-set sizes are traced.
    pub watch: Vec<usize>,
    /// Count invariant breaches (weight range, X ≤ X′, writes to pinned
    /// cells) instead of trusting the construction.
    pub check_invariants: bool,
    pub mutation: Mutation,
    /// Visit the edges of each vertex in reverse index order.
    pub reverse_edge_order: bool,
}

impl RunOptions {
    pub fn checked() -> Self {
        Self {
            check_invariants: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    /// Updates that left the weight unchanged although the vertex was a
    /// right-neighbor (not activated, pinned, or an earlier vertex missed
    /// the color).
    pub carried: u64,
    /// Updates in the well-behaved case.
    pub main_case: u64,
    /// Updates where the upper threshold was in play.
    pub upper_case: u64,
    /// Updates where the lower threshold was in play (hypergraphs only).
    pub lower_case: u64,
    pub pinned_high: u64,
    pub pinned_low: u64,
    pub invariant_violations: u64,
    pub first_violation: Option<String>,
    /// Class draws made; one per activated (step, color) in the graph engine.
    pub class_draws: u64,
}

impl RunStats {
    pub(crate) fn violation(&mut self, msg: impl FnOnce() -> String) {
        self.invariant_violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(msg());
        }
    }
}

/// Per (vertex, color) weights plus flag bits, one row of `q` cells per
/// vertex. Once a vertex is processed its row is frozen, so after a run
/// row `v_k` holds `p_{k-1}(v_k, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<W> {
    pub n: usize,
    pub q: usize,
    pub p: Vec<W>,
    pub flags: Vec<u8>,
}

impl<W: Weight> WeightMatrix<W> {
    pub fn filled(n: usize, q: usize, init: W) -> Self {
        Self {
            n,
            q,
            p: vec![init; n * q],
            flags: vec![0; n * q],
        }
    }

    #[inline]
    pub fn idx(&self, v: usize, c: usize) -> usize {
        v * self.q + c
    }

    pub fn row(&self, v: usize) -> &[W] {
        &self.p[v * self.q..(v + 1) * self.q]
    }

    pub fn flag_row(&self, v: usize) -> &[u8] {
        &self.flags[v * self.q..(v + 1) * self.q]
    }

    #[inline]
    pub fn weight(&self, v: usize, c: usize) -> &W {
        &self.p[self.idx(v, c)]
    }

    #[inline]
    pub fn has(&self, v: usize, c: usize, flag: u8) -> bool {
        self.flags[self.idx(v, c)] & flag != 0
    }

    #[inline]
    pub fn is_bad(&self, v: usize, c: usize) -> bool {
        self.has(v, c, BAD_HIGH | BAD_LOW)
    }

    pub fn bad_counts(&self, v: usize) -> (usize, usize) {
        let row = self.flag_row(v);
        (
            row.iter().filter(|&&f| f & BAD_HIGH != 0).count(),
            row.iter().filter(|&&f| f & BAD_LOW != 0).count(),
        )
    }

    pub fn selected(&self, v: usize) -> Vec<u32> {
        (0..self.q)
            .filter(|&c| self.has(v, c, SELECTED))
            .map(|c| c as u32)
            .collect()
    }
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct RunOutput<W> {
    pub state: WeightMatrix<W>,
    pub stats: RunStats,
    pub trace: RunTrace,
}

impl<W: Weight> RunOutput<W> {
    pub fn sets(&self) -> Vec<Vec<u32>> {
        (0..self.state.n).map(|v| self.state.selected(v)).collect()
    }

    pub fn color_sets(&self, alpha: f64) -> ColorSets {
        ColorSets::new(self.state.q, alpha, self.sets())
    }

    /// `p_{k-1}(v_k, c)`: the weight a vertex carried when it was processed.
    pub fn weight_at_processing(&self, v: usize, c: usize) -> &W {
        self.state.weight(v, c)
    }
}

/// Records the watched rows after `processed` vertices have been handled.
pub(crate) fn snapshot<W: Weight>(
    trace: &mut RunTrace,
    state: &WeightMatrix<W>,
    position: &[usize],
    processed: usize,
) {
    for &v in &trace.watch {
        if position[v] < processed {
            continue;
        }
        let (bad_hi, bad_lo) = state.bad_counts(v);
        trace.rows.push(TraceRow {
            iteration: processed,
            vertex: v,
            potential: crate::analysis::diagnostics::potential(state.row(v)),
            entropy: crate::analysis::diagnostics::entropy(state.row(v)),
            bad_hi,
            bad_lo,
        });
    }
}

/// A configured engine bound to one instance.
pub trait Engine: Sync {
    fn instance(&self) -> &dyn EdgeSet;
    /// Color universe size from the parameters.
    fn q(&self) -> usize;
    /// Initial weight (α, or an override).
    fn initial_weight(&self) -> f64;
    fn run_with(&self, q: usize, seed: u64) -> Result<RunOutput<f64>, EngineError>;
    fn params_json(&self) -> serde_json::Value;

    fn run(&self, seed: u64) -> Result<RunOutput<f64>, EngineError> {
        self.run_with(self.q(), seed)
    }
}
