//! Browser bindings: a regime curve, a generate-and-color run, and the
//! exact oracle on a tiny instance. Every export returns a JSON string;
//! failures come back as `{"error": "..."}`.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fraccolor::analysis::{
    check_regime, exact_oracle_on, sample_independent_set, OracleLimits, RegimeMode,
};
use fraccolor::engine::{Engine, Mutation};
use fraccolor::generators::{
    gen_linear_girth4_hypergraph, gen_locally_r_colorable, gen_triangle_free_degenerate, GenSpec,
};
use fraccolor::graph_engine::{GraphEngine, GraphParams};
use fraccolor::hyper_engine::{exclusive_degeneracy, HyperEngine, HyperParams};
use fraccolor::instances::io::Instance;
use fraccolor::instances::{degeneracy_ordering, find_local_coloring, Graph, Hypergraph};

fn respond(res: Result<Value, String>) -> String {
    res.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn mode(name: &str) -> Result<RegimeMode, String> {
    match name {
        "graph" => Ok(RegimeMode::Graph),
        "hyper" => Ok(RegimeMode::Hyper),
        other => Err(format!("unknown mode {other:?}")),
    }
}

/// Proof ratio and α at `points` log-spaced degeneracies in `[d_min, d_max]`.
#[wasm_bindgen]
pub fn regime_curve(
    kind: &str,
    r: usize,
    eps: f64,
    d_min: f64,
    d_max: f64,
    points: usize,
) -> String {
    respond((|| {
        let m = mode(kind)?;
        if !(d_min > 1.0 && d_max >= d_min)
            || points < 2
            || r < 1
            || (m == RegimeMode::Hyper && r < 2)
        {
            return Err("need 1 < d_min <= d_max, points >= 2, r >= 1 (2 for hypergraphs)".into());
        }
        let step = (d_max / d_min).ln() / (points - 1) as f64;
        let rows: Vec<Value> = (0..points)
            .map(|i| {
                let d = d_min * (step * i as f64).exp();
                let rep = check_regime(d, r, eps, m);
                json!({ "d": d, "alpha": rep.alpha, "ratio": rep.ratio, "bound": rep.bound, "inside": rep.inside })
            })
            .collect();
        Ok(json!(rows))
    })())
}

/// Generates an instance, runs one coloring and samples an independent set.
#[wasm_bindgen]
pub fn color_demo(family: &str, n: usize, d: usize, r: usize, q: usize, seed: u64) -> String {
    respond(color_inner(family, n, d, r, q, seed))
}

fn summary(engine: &dyn Engine, seed: u64, edges: Value) -> Result<Value, String> {
    let out = engine.run(seed).map_err(|e| e.to_string())?;
    let sets = out.color_sets(engine.initial_weight());
    let (color, members) = sample_independent_set(&sets, seed);
    let sizes: Vec<usize> = sets.sets.iter().map(Vec::len).collect();
    Ok(json!({
        "n": sizes.len(),
        "edges": edges,
        "params": engine.params_json(),
        "alpha": sets.alpha,
        "alpha_achieved": sets.alpha_achieved,
        "min_size": sets.min_size(),
        "sizes": sizes,
        "valid": sets.is_valid_for(engine.instance()),
        "sample": { "color": color, "vertices": members },
    }))
}

fn color_inner(
    family: &str,
    n: usize,
    d: usize,
    r: usize,
    q: usize,
    seed: u64,
) -> Result<Value, String> {
    let spec = GenSpec::new(n, d, r, seed);
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match family {
        "graph-trianglefree" | "graph-local-r" => {
            let (g, local) = if family == "graph-local-r" {
                let (g, local, _) = gen_locally_r_colorable(&spec).map_err(|e| err(&e))?;
                (g, local)
            } else {
                let (g, _) = gen_triangle_free_degenerate(&spec).map_err(|e| err(&e))?;
                let local = find_local_coloring(&g, 1, 1 << 20).map_err(|e| err(&e))?;
                (g, local)
            };
            let ord = degeneracy_ordering(&g);
            let params =
                GraphParams::new(q, 1.0, local.r, ord.d.max(2), seed).map_err(|e| err(&e))?;
            let engine = GraphEngine::new(&g, &ord, &local, params).map_err(|e| err(&e))?;
            summary(&engine, seed, json!(g.edges()))
        }
        "hyper-girth4" => {
            let (h, _) = gen_linear_girth4_hypergraph(&spec).map_err(|e| err(&e))?;
            let ord = degeneracy_ordering(&h);
            let d_use = exclusive_degeneracy(ord.d, r, 1.0);
            let params = HyperParams::new(q, 1.0, r, d_use, seed).map_err(|e| err(&e))?;
            let engine = HyperEngine::new(&h, &ord, params).map_err(|e| err(&e))?;
            summary(&engine, seed, json!(h.edges()))
        }
        other => Err(format!("unknown family {other:?}")),
    }
}

/// Exact expectations on a loose path of `edges` edges (uniformity `r` for
/// hypergraphs, local colorability `r` for graphs).
#[wasm_bindgen]
pub fn oracle_path(kind: &str, r: usize, edges: usize, p0: &str) -> String {
    respond((|| {
        let p0 =
            BigRational::from_str(p0).map_err(|_| format!("{p0:?} is not a rational like 1/4"))?;
        let instance = match mode(kind)? {
            RegimeMode::Graph => {
                let list: Vec<(usize, usize)> = (0..edges).map(|i| (i, i + 1)).collect();
                Instance::Graph(Graph::new(edges + 1, &list).map_err(|e| e.to_string())?)
            }
            RegimeMode::Hyper => {
                if r < 2 {
                    return Err("hypergraphs need r >= 2".into());
                }
                let list: Vec<Vec<usize>> = (0..edges)
                    .map(|i| (i * (r - 1)..i * (r - 1) + r).collect())
                    .collect();
                let n = if edges == 0 { r } else { edges * (r - 1) + 1 };
                Instance::Hyper(Hypergraph::new(n, r, &list).map_err(|e| e.to_string())?)
            }
        };
        let res = exact_oracle_on(
            &instance,
            None,
            r,
            &p0,
            None,
            Mutation::None,
            OracleLimits::default(),
        )
        .map_err(|e| e.to_string())?;
        let mut v = res.to_json();
        v["exact"] = res.is_exact().into();
        Ok(v)
    })())
}
