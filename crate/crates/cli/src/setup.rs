use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use fraccolor::engine::{Engine, RunOptions};
use fraccolor::graph_engine::{GraphEngine, GraphParams};
use fraccolor::hyper_engine::{kappa, HyperEngine, HyperParams};
use fraccolor::instances::io::{parse_instance, parse_local_coloring, Instance};
use fraccolor::instances::{degeneracy_ordering, find_local_coloring};

use crate::error::CliError;

/// Node budget per neighborhood when searching for a local coloring.
const LOCAL_SEARCH_BUDGET: u64 = 1 << 22;

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Instance file (graph or hypergraph text format).
    pub instance: PathBuf,
    /// Number of colors; defaults to ceil(10/alpha).
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Local colorability of a graph; ignored for hypergraphs.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Degeneracy used in alpha; defaults to the instance's degeneracy.
    #[arg(long)]
    pub d: Option<usize>,
    /// Raise d until the hypergraph threshold cases cannot meet.
    #[arg(long)]
    pub exclusive_d: bool,
    /// Initial weight overriding the alpha formula.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Precomputed local coloring file for graphs.
    #[arg(long)]
    pub local_coloring: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn default_q(q: Option<usize>, alpha: f64) -> usize {
    q.unwrap_or_else(|| (10.0 / alpha).ceil() as usize)
}

/// Builds the engine for `args.instance` and hands it to `f`. `watch`
/// `None` watches the first vertex of the ordering, which is enough for
/// the initialization identities.
pub fn with_engine<T>(
    args: &EngineArgs,
    watch: Option<Vec<usize>>,
    f: impl FnOnce(&dyn Engine) -> Result<T, CliError>,
) -> Result<T, CliError> {
    let instance = read_instance(&args.instance)?;
    let options = |first: Option<usize>| RunOptions {
        watch: watch.clone().unwrap_or_else(|| first.into_iter().collect()),
        ..RunOptions::checked()
    };
    match &instance {
        Instance::Graph(g) => {
            let ord = degeneracy_ordering(g);
            let local = match &args.local_coloring {
                Some(path) => {
                    let text = fs::read_to_string(path)?;
                    let loc = parse_local_coloring(&text)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    loc.verify(g)
                        .map_err(|e| CliError::Structure(e.to_string()))?;
                    loc
                }
                None => find_local_coloring(g, args.r, LOCAL_SEARCH_BUDGET)
                    .map_err(|e| CliError::Structure(e.to_string()))?,
            };
            let d = args.d.unwrap_or(ord.d).max(2);
            let mut params = match args.alpha {
                Some(a) => GraphParams::new(1, args.eps, local.r, d, args.seed)?.with_alpha(a)?,
                None => GraphParams::new(1, args.eps, local.r, d, args.seed)?,
            };
            params.q = default_q(args.q, params.alpha);
            let engine = GraphEngine::new(g, &ord, &local, params)?
                .with_options(options(ord.order.first().copied()));
            f(&engine)
        }
        Instance::Hyper(h) => {
            let ord = degeneracy_ordering(h);
            let mut d = args.d.unwrap_or(ord.d).max(2);
            if args.exclusive_d {
                d = fraccolor::hyper_engine::exclusive_degeneracy(d, h.r(), args.eps);
            }
            let mut params = HyperParams::new(1, args.eps, h.r(), d, args.seed)?;
            if let Some(a) = args.alpha {
                let k = kappa(args.eps, h.r());
                let mut p = HyperParams::explicit(1, h.r(), a, a.powf(1.0 + k), args.seed)?;
                (p.eps, p.d, p.kappa) = (args.eps, d, k);
                params = p;
            }
            params.q = default_q(args.q, params.alpha);
            let engine = HyperEngine::new(h, &ord, params)
                .map_err(|e| match e {
                    fraccolor::engine::EngineError::Structure(m) => {
                        CliError::Structure(format!("girth/linearity validation: {m}"))
                    }
                    other => other.into(),
                })?
                .with_options(options(ord.order.first().copied()));
            f(&engine)
        }
    }
}
