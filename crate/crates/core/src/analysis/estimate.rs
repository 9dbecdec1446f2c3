//! Monte Carlo estimators over many independent seeded runs.
//!
//! Run `m` uses `derive_seed(master, m)`, results are gathered in run order
//! and aggregated afterwards, so thread count never changes a report.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::sampler::sample_independent_set;
use crate::coins::derive_seed;
use crate::engine::{Engine, EngineError, RunOutput};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatError {
    #[error("need at least {needed} runs, got {got}")]
    TooFewRuns { needed: usize, got: usize },
    #[error("q ladder must be strictly increasing and nonempty")]
    BadLadder,
    #[error("invalid watch vertex {0}")]
    BadVertex(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Relative tolerance for the initialization identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Bookkeeping gathered from every run of an estimator.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunHealth {
    pub runs: usize,
    pub invariant_violations: u64,
    /// Watched vertices whose `P_0` or `Q_0` missed `qα`, `qα ln(1/α)`.
    pub identity_failures: usize,
    pub identity_checks: usize,
    /// Times the lower-threshold case was entered.
    pub lower_case_entries: u64,
}

impl RunHealth {
    pub fn is_clean(&self) -> bool {
        self.invariant_violations == 0 && self.identity_failures == 0
    }

    pub fn merge(&mut self, other: &RunHealth) {
        self.runs += other.runs;
        self.invariant_violations += other.invariant_violations;
        self.identity_failures += other.identity_failures;
        self.identity_checks += other.identity_checks;
        self.lower_case_entries += other.lower_case_entries;
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= IDENTITY_TOLERANCE * b.abs().max(f64::MIN_POSITIVE)
}

/// Health of a single run: invariant counters and the `P_0`, `Q_0` identities.
pub fn run_health(out: &RunOutput<f64>, alpha: f64) -> RunHealth {
    let q = out.state.q as f64;
    let (p0, q0) = (q * alpha, q * alpha * (1.0 / alpha).ln());
    let mut health = RunHealth {
        runs: 1,
        invariant_violations: out.stats.invariant_violations,
        lower_case_entries: out.stats.lower_case,
        ..RunHealth::default()
    };
    for row in out.trace.initial_rows() {
        health.identity_checks += 1;
        if !rel_close(row.potential, p0) || !rel_close(row.entropy, q0) {
            health.identity_failures += 1;
        }
    }
    health
}

fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| panic!("failed to build a {j}-thread pool")),
        None => work(),
    }
}

/// Runs `engine` `runs` times at color count `q` and maps each output.
pub fn map_runs<E, T, F>(
    engine: &E,
    q: usize,
    runs: usize,
    master_seed: u64,
    jobs: Option<usize>,
    f: F,
) -> Result<(Vec<T>, RunHealth), EngineError>
where
    E: Engine + ?Sized,
    T: Send,
    F: Fn(usize, &RunOutput<f64>) -> T + Sync,
{
    let alpha = engine.initial_weight();
    let results: Result<Vec<(T, RunHealth)>, EngineError> = with_jobs(jobs, || {
        (0..runs)
            .into_par_iter()
            .map(|m| {
                let out = engine.run_with(q, derive_seed(master_seed, m as u64))?;
                Ok((f(m, &out), run_health(&out, alpha)))
            })
            .collect()
    });
    let mut health = RunHealth::default();
    let values = results?
        .into_iter()
        .map(|(t, h)| {
            health.merge(&h);
            t
        })
        .collect();
    Ok((values, health))
}

fn mean_se(samples: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut sum, mut sum_sq) = (0.0, 0.0, 0.0);
    for x in samples {
        n += 1.0;
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

fn sample_sd(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalsReport {
    pub runs: usize,
    pub q: usize,
    /// Per vertex mean of `|S(v)|/q`.
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub min_mean: f64,
    pub min_vertex: usize,
    pub params: serde_json::Value,
    pub health: RunHealth,
}

/// Mean and standard error of `|S(v)|/q` over `runs` runs.
pub fn estimate_marginals<E: Engine + ?Sized>(
    engine: &E,
    runs: usize,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<MarginalsReport, StatError> {
    if runs < 2 {
        return Err(StatError::TooFewRuns {
            needed: 2,
            got: runs,
        });
    }
    let q = engine.q();
    let (sizes, health) = map_runs(engine, q, runs, master_seed, jobs, |_, out| {
        out.trace.final_sizes.clone()
    })?;
    let n = engine.instance().vertex_count();
    let (mut mean, mut se) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for v in 0..n {
        let (m, s) = mean_se(sizes.iter().map(|run| run[v] as f64 / q as f64));
        mean.push(m);
        se.push(s);
    }
    let (min_vertex, min_mean) = mean
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    Ok(MarginalsReport {
        runs,
        q,
        mean,
        se,
        min_mean,
        min_vertex,
        params: engine.params_json(),
        health,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStat {
    pub vertex: usize,
    pub color: usize,
    pub mean: f64,
    pub se: f64,
    pub deviates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub runs: usize,
    pub alpha: f64,
    pub cells: Vec<CellStat>,
    pub deviating_fraction: f64,
    pub passed: bool,
    pub health: RunHealth,
}

/// Multiple of the standard error a Monte Carlo mean may stray.
pub const SE_MULTIPLE: f64 = 4.0;
/// Largest fraction of deviating cells still counted as a pass.
pub const MAX_DEVIATING_FRACTION: f64 = 0.05;

/// `count` distinct (vertex, color) cells drawn with a seeded generator.
pub fn sample_cells(n: usize, q: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let total = n * q;
    let count = count.min(total);
    let mut picked = std::collections::BTreeSet::new();
    let mut i = 0u64;
    while picked.len() < count {
        let x = derive_seed(seed, i) % total as u64;
        picked.insert(x as usize);
        i += 1;
    }
    picked.into_iter().map(|x| (x / q, x % q)).collect()
}

/// Compares the run mean of `p_{k-1}(v_k, c)` with the initial weight for
/// each cell; passes when at most 5% of cells deviate by more than 4 SE.
pub fn martingale_test<E: Engine + ?Sized>(
    engine: &E,
    runs: usize,
    cells: &[(usize, usize)],
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<MartingaleReport, StatError> {
    if runs < 100 {
        return Err(StatError::TooFewRuns {
            needed: 100,
            got: runs,
        });
    }
    let alpha = engine.initial_weight();
    let (values, health) = map_runs(engine, engine.q(), runs, master_seed, jobs, |_, out| {
        cells
            .iter()
            .map(|&(v, c)| *out.weight_at_processing(v, c))
            .collect::<Vec<f64>>()
    })?;
    let stats: Vec<CellStat> = cells
        .iter()
        .enumerate()
        .map(|(i, &(vertex, color))| {
            let (mean, se) = mean_se(values.iter().map(|run| run[i]));
            let dev = (mean - alpha).abs();
            CellStat {
                vertex,
                color,
                mean,
                se,
                deviates: dev > SE_MULTIPLE * se && dev > 1e-12 * alpha,
            }
        })
        .collect();
    let deviating = stats.iter().filter(|c| c.deviates).count();
    let deviating_fraction = deviating as f64 / stats.len().max(1) as f64;
    Ok(MartingaleReport {
        runs,
        alpha,
        cells: stats,
        deviating_fraction,
        passed: deviating_fraction <= MAX_DEVIATING_FRACTION,
        health,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub runs: usize,
    /// Per vertex `Pr[v ∈ I]` from one sampled color per run.
    pub sampled: Vec<f64>,
    /// Per vertex mean of `|S(v)|/q`.
    pub from_sizes: Vec<f64>,
    /// Combined standard error of the difference.
    pub se: Vec<f64>,
    pub disagreeing: Vec<usize>,
    pub passed: bool,
    pub health: RunHealth,
}

/// Estimates `Pr[v ∈ I]` two ways: sampling `ℓ` once per run and checking
/// membership, and averaging `|S(v)|/q`. They must agree within 4 SE.
pub fn membership_agreement<E: Engine + ?Sized>(
    engine: &E,
    runs: usize,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<AgreementReport, StatError> {
    if runs < 2 {
        return Err(StatError::TooFewRuns {
            needed: 2,
            got: runs,
        });
    }
    let q = engine.q();
    let alpha = engine.initial_weight();
    let n = engine.instance().vertex_count();
    let (samples, health) = map_runs(engine, q, runs, master_seed, jobs, |m, out| {
        let sets = out.color_sets(alpha);
        let (_, members) = sample_independent_set(&sets, derive_seed(!master_seed, m as u64));
        let mut hit = vec![0.0; n];
        for v in members {
            hit[v] = 1.0;
        }
        let frac: Vec<f64> = out
            .trace
            .final_sizes
            .iter()
            .map(|&s| s as f64 / q as f64)
            .collect();
        (hit, frac)
    })?;
    let (mut sampled, mut from_sizes, mut se, mut disagreeing) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for v in 0..n {
        let (a, se_a) = mean_se(samples.iter().map(|s| s.0[v]));
        let (b, se_b) = mean_se(samples.iter().map(|s| s.1[v]));
        let s = (se_a * se_a + se_b * se_b).sqrt();
        if (a - b).abs() > SE_MULTIPLE * s && (a - b).abs() > 1e-12 {
            disagreeing.push(v);
        }
        sampled.push(a);
        from_sizes.push(b);
        se.push(s);
    }
    Ok(AgreementReport {
        runs,
        sampled,
        from_sizes,
        se,
        passed: disagreeing.is_empty(),
        disagreeing,
        health,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rung {
    pub q: usize,
    /// Standard deviation of `|S(v)|/q` per watched vertex.
    pub sd: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub runs: usize,
    pub watch: Vec<usize>,
    pub rungs: Vec<Rung>,
    /// `sd(q_t) / sd(q_{t+1})` per watched vertex, per consecutive rung pair.
    pub ratios: Vec<Vec<f64>>,
    /// Required shrink factor per pair (1.5 for a 4× step).
    pub required: Vec<f64>,
    /// Fraction of measurable vertices meeting the requirement, per pair.
    pub passing_fraction: Vec<f64>,
    pub passed: bool,
    pub health: RunHealth,
}

/// Required fraction of watched vertices that must shrink fast enough.
pub const MIN_SHRINKING_FRACTION: f64 = 0.9;

/// Estimates `sd(|S(v)|/q)` along an increasing ladder of color counts.
/// A 4× step must shrink the sd by at least 1.5× (general steps scale the
/// requirement as `1.5^{log_4(step)}`).
pub fn concentration_probe<E: Engine + ?Sized>(
    engine: &E,
    q_ladder: &[usize],
    runs: usize,
    watch: &[usize],
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<ConcentrationReport, StatError> {
    if q_ladder.is_empty() || q_ladder.windows(2).any(|w| w[0] >= w[1]) || q_ladder[0] == 0 {
        return Err(StatError::BadLadder);
    }
    if runs < 100 {
        return Err(StatError::TooFewRuns {
            needed: 100,
            got: runs,
        });
    }
    let n = engine.instance().vertex_count();
    if let Some(&v) = watch.iter().find(|&&v| v >= n) {
        return Err(StatError::BadVertex(v));
    }
    let mut health = RunHealth::default();
    let mut rungs = Vec::with_capacity(q_ladder.len());
    for (t, &q) in q_ladder.iter().enumerate() {
        let (sizes, h) = map_runs(
            engine,
            q,
            runs,
            derive_seed(master_seed, t as u64),
            jobs,
            |_, out| {
                watch
                    .iter()
                    .map(|&v| out.trace.final_sizes[v] as f64 / q as f64)
                    .collect::<Vec<f64>>()
            },
        )?;
        health.merge(&h);
        let sd = (0..watch.len())
            .map(|i| sample_sd(&sizes.iter().map(|s| s[i]).collect::<Vec<_>>()))
            .collect();
        rungs.push(Rung { q, sd });
    }
    let mut ratios = Vec::new();
    let mut required = Vec::new();
    let mut passing_fraction = Vec::new();
    for pair in rungs.windows(2) {
        let step = pair[1].q as f64 / pair[0].q as f64;
        let need = 1.5f64.powf(step.ln() / 4f64.ln());
        let ratio: Vec<f64> = pair[0]
            .sd
            .iter()
            .zip(&pair[1].sd)
            .map(|(a, b)| {
                if *b > 0.0 {
                    a / b
                } else if *a > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NAN
                }
            })
            .collect();
        let measurable: Vec<f64> = ratio.iter().copied().filter(|x| !x.is_nan()).collect();
        let ok = measurable.iter().filter(|&&x| x >= need).count();
        passing_fraction.push(if measurable.is_empty() {
            0.0
        } else {
            ok as f64 / measurable.len() as f64
        });
        ratios.push(ratio);
        required.push(need);
    }
    let passed = passing_fraction
        .iter()
        .all(|&f| f >= MIN_SHRINKING_FRACTION);
    Ok(ConcentrationReport {
        runs,
        watch: watch.to_vec(),
        rungs,
        ratios,
        required,
        passing_fraction,
        passed,
        health,
    })
}
