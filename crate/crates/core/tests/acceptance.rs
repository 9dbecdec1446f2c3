//! Acceptance gate. Each test prints one `criterion N: PASS|FAIL` line.

use std::sync::OnceLock;
use std::time::Instant;

use fraccolor::analysis::oracle::Witness;
use fraccolor::analysis::{
    catalog, check_regime, color_class, concentration_probe, exact_oracle_on, is_independent,
    map_runs, martingale_test, membership_agreement, mutation_witnesses, sample_cells,
    MartingaleReport, OracleLimits, RegimeMode, RunHealth,
};
use fraccolor::engine::{Engine, Mutation, RunOptions, RunOutput, WeightMatrix, BAD_HIGH, BAD_LOW};
use fraccolor::generators::{
    gen_linear_girth4_hypergraph, gen_locally_r_colorable, gen_triangle_free_degenerate, GenSpec,
};
use fraccolor::graph_engine::{GraphEngine, GraphParams};
use fraccolor::hyper_engine::{exclusive_degeneracy, HyperEngine, HyperParams};
use fraccolor::instances::io::Instance;
use fraccolor::instances::{degeneracy_ordering, find_local_coloring};
use num_rational::BigRational;

const EPS: f64 = 1.0;

fn report(n: u32, ok: bool, detail: String) {
    println!(
        "criterion {n}: {} - {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn options(first: &[usize]) -> RunOptions {
    // watching the first vertices of the ordering records their initial row
    // and little else, since processed vertices leave the trace
    RunOptions {
        watch: first.to_vec(),
        check_invariants: true,
        ..RunOptions::default()
    }
}

/// Pinned cells of unprocessed rows must still hold their pin value.
fn pins_hold(state: &WeightMatrix<f64>, high: f64, low: Option<f64>) -> bool {
    state
        .p
        .iter()
        .zip(&state.flags)
        .all(|(&w, &f)| (f & BAD_HIGH == 0 || w == high) && (f & BAD_LOW == 0 || Some(w) == low))
}

fn graph_engine_runs(seed: u64, runs: usize, spec: &GenSpec, q: usize) -> (usize, RunHealth, bool) {
    let (g, local, _) = gen_locally_r_colorable(spec).expect("generator");
    let ord = degeneracy_ordering(&g);
    let params = GraphParams::new(q, EPS, spec.r, ord.d.max(2), seed).unwrap();
    let alpha = params.alpha;
    let engine = GraphEngine::new(&g, &ord, &local, params)
        .unwrap()
        .with_options(options(&ord.order[..2]));
    let (per_run, health) = map_runs(&engine, q, runs, seed, None, |_, out: &RunOutput<f64>| {
        (
            out.color_sets(alpha).violations(&g).len(),
            pins_hold(&out.state, 1.0, None),
        )
    })
    .unwrap();
    let violations = per_run.iter().map(|x| x.0).sum();
    (violations, health, per_run.iter().all(|x| x.1))
}

struct Validity {
    violations: usize,
    lower_entries_r2: u64,
    pins: bool,
    health: RunHealth,
    seconds: f64,
}

fn graph_validity() -> &'static Validity {
    static CELL: OnceLock<Validity> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let (mut violations, mut pins, mut health) = (0, true, RunHealth::default());
        for i in 0..20u64 {
            let spec = GenSpec::new(300, 12, 1 + (i % 3) as usize, 100 + i);
            let (v, h, p) = graph_engine_runs(1000 + i, 10, &spec, 20_000);
            violations += v;
            pins &= p;
            health.merge(&h);
        }
        Validity {
            violations,
            lower_entries_r2: 0,
            pins,
            health,
            seconds: start.elapsed().as_secs_f64(),
        }
    })
}

fn hyper_validity() -> &'static Validity {
    static CELL: OnceLock<Validity> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let (mut violations, mut r2_lower, mut pins, mut health) =
            (0, 0, true, RunHealth::default());
        for i in 0..20u64 {
            let r = 2 + (i % 3) as usize;
            let spec = GenSpec::new(300, 10, r, 200 + i);
            let (h, _) = gen_linear_girth4_hypergraph(&spec).expect("generator");
            let ord = degeneracy_ordering(&h);
            let d = exclusive_degeneracy(ord.d, r, EPS);
            let params = HyperParams::new(20_000, EPS, r, d, 2000 + i).unwrap();
            let (alpha, lower) = (params.alpha, params.lower);
            let engine = HyperEngine::new(&h, &ord, params)
                .unwrap()
                .with_options(options(&ord.order[..2]));
            let (per_run, run_health) = map_runs(
                &engine,
                20_000,
                10,
                2000 + i,
                None,
                |_, out: &RunOutput<f64>| {
                    (
                        out.color_sets(alpha).violations(&h).len(),
                        pins_hold(&out.state, 0.5, Some(lower)),
                    )
                },
            )
            .unwrap();
            violations += per_run.iter().map(|x| x.0).sum::<usize>();
            pins &= per_run.iter().all(|x| x.1);
            if r == 2 {
                r2_lower += run_health.lower_case_entries;
            }
            health.merge(&run_health);
        }
        Validity {
            violations,
            lower_entries_r2: r2_lower,
            pins,
            health,
            seconds: start.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_01_graph_validity() {
    let v = graph_validity();
    let ok = v.violations == 0 && v.health.runs == 200 && v.pins;
    report(
        1,
        ok,
        format!(
            "{} runs, {} edge-intersection violations, {:.1}s",
            v.health.runs, v.violations, v.seconds
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_hypergraph_validity() {
    let v = hyper_validity();
    let ok = v.violations == 0 && v.lower_entries_r2 == 0 && v.health.runs == 200 && v.pins;
    report(
        2,
        ok,
        format!(
            "{} runs, {} monochromatic edges, r=2 lower-case entries {}, {:.1}s",
            v.health.runs, v.violations, v.lower_entries_r2, v.seconds
        ),
    );
    assert!(ok);
}

fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn criterion_03_exact_oracle() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for entry in catalog() {
        for p0 in [rational(1, 10), rational(1, 4)] {
            let classes = match entry.instance {
                Instance::Graph(_) => entry.classes.clone(),
                Instance::Hyper(_) => vec![0],
            };
            for r in classes {
                let res = exact_oracle_on(
                    &entry.instance,
                    None,
                    r,
                    &p0,
                    None,
                    Mutation::None,
                    OracleLimits::default(),
                )
                .unwrap();
                checked += 1;
                if !res.is_exact() {
                    failures.push(format!("{} p0={p0} r={r}", entry.name));
                }
            }
        }
    }
    let ok = failures.is_empty() && checked > 0;
    report(
        3,
        ok,
        format!(
            "{checked} (instance, p0, r) cases exact, failures {failures:?}, {:.2}s",
            start.elapsed().as_secs_f64()
        ),
    );
    assert!(ok);
}

fn martingale_graph() -> (fraccolor::Graph, fraccolor::LocalColoring) {
    let (g, _) = gen_triangle_free_degenerate(&GenSpec::new(100, 8, 1, 4)).unwrap();
    let local = find_local_coloring(&g, 1, 1 << 20).unwrap();
    (g, local)
}

struct Martingale {
    graph: MartingaleReport,
    hyper: MartingaleReport,
    graph_d: usize,
    hyper_d: usize,
    seconds: f64,
}

fn martingale() -> &'static Martingale {
    static CELL: OnceLock<Martingale> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let q = 50;
        let (g, local) = martingale_graph();
        let ord = degeneracy_ordering(&g);
        let params = GraphParams::new(q, EPS, 1, ord.d.max(2), 4).unwrap();
        let engine = GraphEngine::new(&g, &ord, &local, params)
            .unwrap()
            .with_options(options(&ord.order[..2]));
        let cells = sample_cells(g.n(), q, 200, 41);
        let graph = martingale_test(&engine, 5000, &cells, 42, None).unwrap();

        let (h, _) = gen_linear_girth4_hypergraph(&GenSpec::new(100, 6, 3, 5)).unwrap();
        let hord = degeneracy_ordering(&h);
        let d = exclusive_degeneracy(hord.d, 3, EPS);
        let hparams = HyperParams::new(q, EPS, 3, d, 5).unwrap();
        let hengine = HyperEngine::new(&h, &hord, hparams)
            .unwrap()
            .with_options(options(&hord.order[..2]));
        let hcells = sample_cells(h.n(), q, 200, 51);
        let hyper = martingale_test(&hengine, 5000, &hcells, 52, None).unwrap();
        Martingale {
            graph,
            hyper,
            graph_d: ord.d,
            hyper_d: hord.d,
            seconds: start.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_04_martingale() {
    let m = martingale();
    let ok = m.graph.passed && m.hyper.passed;
    report(
        4,
        ok,
        format!(
            "graph d={} deviating {:.3}, hypergraph d={} deviating {:.3} (limit 0.05), {:.1}s",
            m.graph_d, m.graph.deviating_fraction, m.hyper_d, m.hyper.deviating_fraction, m.seconds
        ),
    );
    assert!(ok);
}

/// Criteria 5 and 6 cover every run made for criteria 1, 2 and 4.
#[test]
fn criterion_05_06_identities_and_invariants() {
    let m = martingale();
    let mut total = RunHealth::default();
    for h in [
        &graph_validity().health,
        &hyper_validity().health,
        &m.graph.health,
        &m.hyper.health,
    ] {
        total.merge(h);
    }
    let ok5 = total.identity_failures == 0 && total.identity_checks >= 2 * total.runs;
    report(
        5,
        ok5,
        format!(
            "{} runs, {} initial rows checked, {} identity failures",
            total.runs, total.identity_checks, total.identity_failures
        ),
    );
    let ok6 = total.invariant_violations == 0;
    report(
        6,
        ok6,
        format!(
            "{} runs, {} invariant violations (weight range, X <= X', pinned cells unchanged)",
            total.runs, total.invariant_violations
        ),
    );
    assert!(ok5 && ok6);
}

#[test]
fn criterion_07_sampler() {
    let start = Instant::now();
    let q = 64;
    let mut scans = 0;
    let mut dependent = 0;
    let mut disagreements = Vec::new();
    for entry in catalog() {
        let (engine_runs, agreement): (Vec<_>, _) = match &entry.instance {
            Instance::Graph(g) => {
                let r = entry.classes[0];
                let ord = degeneracy_ordering(g);
                let local = find_local_coloring(g, r, 1 << 20).unwrap();
                let params = GraphParams::explicit(q, r, 0.25, 7).unwrap();
                let engine = GraphEngine::new(g, &ord, &local, params).unwrap();
                let runs: Vec<_> = (0..50)
                    .map(|s| engine.run(s).unwrap().color_sets(0.25))
                    .collect();
                let agree = membership_agreement(&engine, 2000, 7, None).unwrap();
                (runs, agree)
            }
            Instance::Hyper(h) => {
                let ord = degeneracy_ordering(h);
                let params = HyperParams::explicit(q, h.r(), 0.25, 0.225, 7).unwrap();
                let engine = HyperEngine::new(h, &ord, params).unwrap();
                let runs: Vec<_> = (0..50)
                    .map(|s| engine.run(s).unwrap().color_sets(0.25))
                    .collect();
                let agree = membership_agreement(&engine, 2000, 7, None).unwrap();
                (runs, agree)
            }
        };
        for sets in &engine_runs {
            for ell in 0..q as u32 {
                let members = color_class(sets, ell);
                scans += 1;
                let independent = match &entry.instance {
                    Instance::Graph(g) => is_independent(g, &members),
                    Instance::Hyper(h) => is_independent(h, &members),
                };
                if !independent {
                    dependent += 1;
                }
            }
        }
        if !agreement.passed {
            disagreements.push(entry.name.clone());
        }
    }
    let ok = dependent == 0 && disagreements.is_empty();
    report(
        7,
        ok,
        format!(
            "{scans} color classes scanned, {dependent} dependent; estimator disagreements {disagreements:?}, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_concentration() {
    let start = Instant::now();
    let (g, local) = martingale_graph();
    let ord = degeneracy_ordering(&g);
    let params = GraphParams::new(1000, EPS, 1, ord.d.max(2), 8).unwrap();
    let engine = GraphEngine::new(&g, &ord, &local, params).unwrap();
    let watch: Vec<usize> = (0..g.n()).collect();
    let rep = concentration_probe(&engine, &[1000, 4000, 16_000], 500, &watch, 8, None).unwrap();
    let ok = rep.passed;
    report(
        8,
        ok,
        format!(
            "fraction of vertices shrinking by >= 1.5x per 4x q: {:?} (need 0.9), {:.1}s",
            rep.passing_fraction,
            start.elapsed().as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_regime_limit_path() {
    // ε → 0 limit at d = 100, r = 1: α = ln 100 / (200 ln 2)
    let rep = check_regime(100.0, 1, 0.0, RegimeMode::Graph);
    let alpha = 100f64.ln() / (200.0 * 2f64.ln());
    let independent = 100.0 * 2f64.ln() * alpha / (1.0 / alpha).ln();
    let target = 0.606;
    let ok = (rep.ratio - target).abs() <= 1e-3 && !rep.inside;
    report(
        9,
        ok,
        format!(
            "graph d=100 r=1 eps->0: ratio {:.4} (closed form {:.4}), expected {target} +- 1e-3, outside={}",
            rep.ratio, independent, !rep.inside
        ),
    );
    assert!((rep.ratio - independent).abs() < 1e-12);
    assert!(ok, "ratio {} is not within 1e-3 of {target}", rep.ratio);
}

#[test]
fn criterion_09_regime_large_d() {
    let d = 2f64.powi(20);
    let rep = check_regime(d, 1, 8.0, RegimeMode::Graph);
    let alpha = d.ln() / (3.0 * d * 2f64.ln());
    let independent = d * 2f64.ln() * alpha / (1.0 / alpha).ln();
    let ok = (rep.ratio - 0.386).abs() <= 1e-3 && rep.inside;
    report(
        9,
        ok,
        format!(
            "graph d=2^20 r=1 eps=8: ratio {:.4} (closed form {:.4}), expected 0.386 +- 1e-3, inside={}",
            rep.ratio, independent, rep.inside
        ),
    );
    assert!((rep.ratio - independent).abs() < 1e-12);
    assert!(ok);
}

#[test]
fn criterion_10_mutation_sensitivity() {
    let mut lines = Vec::new();
    let mut ok = true;
    for w in mutation_witnesses() {
        let clean = w.run(Mutation::None).unwrap();
        let broken = run_broken(&w);
        let caught = !broken;
        ok &= clean.is_exact() && caught;
        lines.push(format!(
            "{}: clean exact={}, mutant caught={caught}",
            w.name,
            clean.is_exact()
        ));
    }
    report(10, ok, lines.join("; "));
    assert!(ok);
}

/// True when the mutant still looks exact.
fn run_broken(w: &Witness) -> bool {
    match w.run(w.mutation) {
        Ok(res) => res.is_exact(),
        Err(_) => false,
    }
}
