mod error;
mod setup;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use fraccolor::analysis::oracle::catalog;
use fraccolor::analysis::{
    check_regime, concentration_probe, estimate_marginals, exact_oracle_on, is_independent,
    martingale_test, membership_agreement, sample_cells, sample_independent_set, OracleLimits,
    RegimeMode,
};
use fraccolor::engine::Mutation;
use fraccolor::generators::{
    gen_linear_girth4_hypergraph, gen_locally_r_colorable, gen_triangle_free_degenerate, GenSpec,
    Sidecar,
};
use fraccolor::instances::io::{write_graph, write_hypergraph, write_local_coloring, Instance};
use fraccolor::instances::{Graph, Hypergraph};
use fraccolor::ColorSets;

use error::{statistical, CliError};
use setup::{read_instance, with_engine, EngineArgs};

#[derive(Parser, Debug)]
#[command(
    name = "fraccolor",
    version,
    about = "Randomized fractional coloring experiments"
)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    GraphTrianglefree,
    GraphLocalR,
    HyperGirth4,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Graph,
    Hyper,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Estimator {
    Marginals,
    Martingale,
    Agreement,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file plus a JSON sidecar.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = GenSpec::DEFAULT_RETRIES)]
        max_retries: usize,
        /// Instance path; the sidecar goes to `<path>.json` and a local
        /// coloring (graph-local-r) to `<path>.local`.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run one coloring and write the color sets.
    Color {
        #[command(flatten)]
        engine: EngineArgs,
        /// Color sets JSON; printed to stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Diagnostics CSV for the watched vertices.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        watch: Vec<usize>,
    },
    /// Draw a uniform color and print its class as an independent set.
    Sample {
        sets: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance to re-check independence against; defaults to the one
        /// recorded in the sets file.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Monte Carlo estimates over many seeded runs.
    Estimate {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Estimator::Marginals)]
        kind: Estimator,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        /// Sampled (vertex, color) cells for the martingale test.
        #[arg(long, default_value_t = 200)]
        cells: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact rational enumeration of every coin outcome on a tiny instance.
    Oracle {
        #[arg(long, value_enum, default_value_t = Mode::Graph)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Build a loose path with this many edges.
        #[arg(long, conflicts_with_all = ["instance", "catalog"])]
        edges: Option<usize>,
        #[arg(long, conflicts_with = "catalog")]
        instance: Option<PathBuf>,
        /// Run the built-in catalog instead of one instance.
        #[arg(long)]
        catalog: bool,
        #[arg(long, default_value = "1/4")]
        p0: String,
        /// Lower threshold for hypergraphs; defaults to 9/10 of p0.
        #[arg(long)]
        lower: Option<String>,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Evaluate the proof ratios for given d, r, eps.
    Regime {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
    /// Standard deviation of |S(v)|/q along a ladder of color counts.
    Probe {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 4000, 16000])]
        ladder: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        runs: usize,
        /// Vertices to measure; all vertices when empty.
        #[arg(long, value_delimiter = ',')]
        watch: Vec<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen {
            family,
            n,
            d,
            r,
            seed,
            max_retries,
            output,
        } => cmd_gen(
            cli,
            *family,
            GenSpec {
                n: *n,
                d: *d,
                r: *r,
                seed: *seed,
                max_retries: *max_retries,
            },
            output,
        ),
        Command::Color {
            engine,
            output,
            trace,
            watch,
        } => cmd_color(cli, engine, output.as_deref(), trace.as_deref(), watch),
        Command::Sample {
            sets,
            seed,
            instance,
        } => cmd_sample(cli, sets, *seed, instance.as_deref()),
        Command::Estimate {
            engine,
            kind,
            runs,
            cells,
            jobs,
            output,
        } => cmd_estimate(cli, engine, *kind, *runs, *cells, *jobs, output.as_deref()),
        Command::Oracle {
            mode,
            r,
            edges,
            instance,
            catalog,
            p0,
            lower,
            order,
        } => cmd_oracle(
            cli,
            *mode,
            *r,
            *edges,
            instance.as_deref(),
            *catalog,
            p0,
            lower.as_deref(),
            order.clone(),
        ),
        Command::Regime { mode, d, r, eps } => cmd_regime(cli, *mode, *d, *r, *eps),
        Command::Probe {
            engine,
            ladder,
            runs,
            watch,
            jobs,
            output,
        } => cmd_probe(cli, engine, ladder, *runs, watch, *jobs, output.as_deref()),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes the report to `output` if given, and to stdout in JSON mode.
fn emit_report(cli: &Cli, report: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = pretty(report);
    if let Some(path) = output {
        write(path, &text)?;
    }
    if cli.json {
        print!("{text}");
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_gen(cli: &Cli, family: Family, spec: GenSpec, output: &Path) -> Result<(), CliError> {
    let (text, sidecar) = match family {
        Family::GraphTrianglefree => {
            let (g, stats) = gen_triangle_free_degenerate(&spec)?;
            (
                write_graph(&g),
                Sidecar::for_graph("graph-trianglefree", &spec, &g, None, stats),
            )
        }
        Family::GraphLocalR => {
            let (g, local, stats) = gen_locally_r_colorable(&spec)?;
            write(
                &with_suffix(output, ".local"),
                &write_local_coloring(&local),
            )?;
            (
                write_graph(&g),
                Sidecar::for_graph("graph-local-r", &spec, &g, Some(&local), stats),
            )
        }
        Family::HyperGirth4 => {
            let (h, stats) = gen_linear_girth4_hypergraph(&spec)?;
            (
                write_hypergraph(&h),
                Sidecar::for_hypergraph("hyper-girth4", &spec, &h, stats),
            )
        }
    };
    write(output, &text)?;
    let side = pretty(&sidecar);
    write(&with_suffix(output, ".json"), &side)?;
    if cli.json {
        print!("{side}");
    } else {
        println!(
            "{}: n={} edges={} degeneracy={} (bound {})",
            output.display(),
            sidecar.n,
            sidecar.edges,
            sidecar.degeneracy,
            sidecar.degeneracy_bound
        );
    }
    if !sidecar.all_valid() {
        return Err(CliError::Structure(format!(
            "generated instance fails validation: {:?}",
            sidecar.validators
        )));
    }
    Ok(())
}

fn cmd_color(
    cli: &Cli,
    args: &EngineArgs,
    output: Option<&Path>,
    trace: Option<&Path>,
    watch: &[usize],
) -> Result<(), CliError> {
    let watch = (!watch.is_empty()).then(|| watch.to_vec());
    with_engine(args, watch, |engine| {
        let out = engine.run(args.seed)?;
        let mut params = engine.params_json();
        params["instance"] = args.instance.display().to_string().into();
        let mut sets: ColorSets = out.color_sets(engine.initial_weight());
        if let Some(k) = params.get("kappa").and_then(Value::as_f64) {
            sets.r = params["r"].as_u64().map(|r| r as usize);
            sets.kappa = Some(k);
        }
        sets.params = Some(params.clone());
        let valid = sets.is_valid_for(engine.instance());
        let text = pretty(&sets);
        match output {
            Some(path) => write(path, &text)?,
            None if !cli.json => print!("{text}"),
            None => {}
        }
        if let Some(path) = trace {
            write(path, &out.trace.to_csv())?;
        }
        if cli.json {
            let report = json!({
                "alpha": sets.alpha,
                "alpha_achieved": sets.alpha_achieved,
                "min_size": sets.min_size(),
                "valid": valid,
                "params": params,
                "stats": out.stats,
            });
            print!("{}", pretty(&report));
        } else {
            eprintln!("alpha {} (q={}, seed={})", sets.alpha, sets.q, args.seed);
            eprintln!("alpha_achieved {}", sets.alpha_achieved);
            eprintln!("min |S(v)| {}", sets.min_size());
            eprintln!("valid {}", if valid { "yes" } else { "no" });
        }
        if out.stats.invariant_violations > 0 {
            return Err(CliError::Structure(format!(
                "{} invariant violations, first: {}",
                out.stats.invariant_violations,
                out.stats.first_violation.unwrap_or_default()
            )));
        }
        if !valid {
            return Err(CliError::Structure("an edge has a common color".into()));
        }
        Ok(())
    })
}

fn cmd_sample(cli: &Cli, path: &Path, seed: u64, instance: Option<&Path>) -> Result<(), CliError> {
    let text = fs::read_to_string(path)?;
    let sets: ColorSets = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let (ell, members) = sample_independent_set(&sets, seed);
    let recorded = sets
        .params
        .as_ref()
        .and_then(|p| p.get("instance"))
        .and_then(Value::as_str)
        .map(PathBuf::from);
    let independent = match instance.map(Path::to_path_buf).or(recorded) {
        Some(p) => Some(match read_instance(&p)? {
            Instance::Graph(g) => is_independent(&g, &members),
            Instance::Hyper(h) => is_independent(&h, &members),
        }),
        None => None,
    };
    if cli.json {
        print!(
            "{}",
            pretty(
                &json!({ "seed": seed, "color": ell, "vertices": members, "independent": independent })
            )
        );
    } else {
        println!("color {ell}");
        let list: Vec<String> = members.iter().map(ToString::to_string).collect();
        println!("{}", list.join(" "));
        if let Some(ok) = independent {
            eprintln!("independent {}", if ok { "yes" } else { "no" });
        }
    }
    if independent == Some(false) {
        return Err(CliError::Structure("sampled set is not independent".into()));
    }
    Ok(())
}

fn cmd_estimate(
    cli: &Cli,
    args: &EngineArgs,
    kind: Estimator,
    runs: usize,
    cells: usize,
    jobs: Option<usize>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    with_engine(args, None, |engine| {
        let n = engine.instance().vertex_count();
        let (report, passed, health) = match kind {
            Estimator::Marginals => {
                let rep = estimate_marginals(engine, runs, args.seed, jobs)?;
                if !cli.json {
                    println!(
                        "runs {} q {}: min mean |S(v)|/q {} at vertex {} (alpha {})",
                        rep.runs,
                        rep.q,
                        rep.min_mean,
                        rep.min_vertex,
                        engine.initial_weight()
                    );
                }
                let health = rep.health.clone();
                (serde_json::to_value(rep), true, health)
            }
            Estimator::Martingale => {
                let cells = sample_cells(n, engine.q(), cells, args.seed);
                let rep = martingale_test(engine, runs, &cells, args.seed, jobs)?;
                if !cli.json {
                    println!(
                        "{} cells, deviating fraction {} ({})",
                        rep.cells.len(),
                        rep.deviating_fraction,
                        if rep.passed { "pass" } else { "fail" }
                    );
                }
                let (passed, health) = (rep.passed, rep.health.clone());
                (serde_json::to_value(rep), passed, health)
            }
            Estimator::Agreement => {
                let rep = membership_agreement(engine, runs, args.seed, jobs)?;
                if !cli.json {
                    println!(
                        "{} of {} vertices disagree ({})",
                        rep.disagreeing.len(),
                        n,
                        if rep.passed { "pass" } else { "fail" }
                    );
                }
                let (passed, health) = (rep.passed, rep.health.clone());
                (serde_json::to_value(rep), passed, health)
            }
        };
        let mut report = report.expect("report serializes");
        report["params"] = engine.params_json();
        report["params"]["instance"] = args.instance.display().to_string().into();
        emit_report(cli, &report, output)?;
        if !health.is_clean() {
            return Err(CliError::Structure(format!("run health: {health:?}")));
        }
        if !passed {
            return Err(statistical("estimator check did not pass"));
        }
        Ok(())
    })
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s)
        .map_err(|_| CliError::Usage(format!("{s:?} is not a rational like 1/4")))
}

/// Loose path with `m` edges: consecutive edges share one vertex.
fn loose_path(mode: Mode, r: usize, m: usize) -> Result<Instance, CliError> {
    let bad = |e: fraccolor::instances::InstanceError| CliError::Usage(e.to_string());
    match mode {
        Mode::Graph => {
            let edges: Vec<(usize, usize)> = (0..m).map(|i| (i, i + 1)).collect();
            Ok(Instance::Graph(Graph::new(m + 1, &edges).map_err(bad)?))
        }
        Mode::Hyper => {
            if r < 2 {
                return Err(CliError::Usage("hypergraph mode needs --r >= 2".into()));
            }
            let edges: Vec<Vec<usize>> = (0..m)
                .map(|i| (i * (r - 1)..i * (r - 1) + r).collect())
                .collect();
            let n = if m == 0 { r } else { m * (r - 1) + 1 };
            Ok(Instance::Hyper(Hypergraph::new(n, r, &edges).map_err(bad)?))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    cli: &Cli,
    mode: Mode,
    r: usize,
    edges: Option<usize>,
    instance: Option<&Path>,
    use_catalog: bool,
    p0: &str,
    lower: Option<&str>,
    order: Option<Vec<usize>>,
) -> Result<(), CliError> {
    let p0 = rational(p0)?;
    let lower = lower.map(rational).transpose()?;
    let jobs: Vec<(String, Instance, usize)> = if use_catalog {
        catalog()
            .into_iter()
            .flat_map(|e| {
                let classes = if e.classes.is_empty() {
                    vec![0]
                } else {
                    e.classes.clone()
                };
                classes
                    .into_iter()
                    .map(move |c| (e.name.to_string(), e.instance.clone(), c))
            })
            .collect()
    } else if let Some(path) = instance {
        vec![(path.display().to_string(), read_instance(path)?, r)]
    } else {
        let m = edges.unwrap_or(1);
        vec![(format!("path-{m}"), loose_path(mode, r, m)?, r)]
    };
    let mut reports = Vec::new();
    let mut all_exact = true;
    for (name, inst, r) in jobs {
        let res = exact_oracle_on(
            &inst,
            order.clone(),
            r,
            &p0,
            lower.as_ref(),
            Mutation::None,
            OracleLimits::default(),
        )?;
        all_exact &= res.is_exact();
        let mut v = res.to_json();
        v["instance"] = name.clone().into();
        v["r"] = r.into();
        if !cli.json {
            let ex: Vec<String> = v["expectations"]
                .as_array()
                .map(|a| {
                    a.iter()
                        .filter_map(Value::as_str)
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default();
            println!("{name} (r={r}, p0={p0})");
            println!("  expectations {}", ex.join(" "));
            println!("  validity {}", res.validity);
            println!(
                "  branches {} ({} pinned)",
                res.branches, res.pinned_branches
            );
            println!("  {}", if res.is_exact() { "exact" } else { "MISMATCH" });
        }
        reports.push(v);
    }
    if cli.json {
        let out = if reports.len() == 1 {
            reports.pop().unwrap()
        } else {
            Value::Array(reports)
        };
        print!("{}", pretty(&out));
    }
    if !all_exact {
        return Err(CliError::Check("oracle expectations differ from p0".into()));
    }
    Ok(())
}

fn cmd_regime(cli: &Cli, mode: Mode, d: f64, r: usize, eps: f64) -> Result<(), CliError> {
    if !(d > 1.0) || r == 0 || (matches!(mode, Mode::Hyper) && r < 2) || !(eps >= 0.0) {
        return Err(CliError::Usage(
            "regime needs d > 1, eps >= 0, r >= 1 (r >= 2 for hypergraphs)".into(),
        ));
    }
    let mode = match mode {
        Mode::Graph => RegimeMode::Graph,
        Mode::Hyper => RegimeMode::Hyper,
    };
    let rep = check_regime(d, r, eps, mode);
    if cli.json {
        print!("{}", pretty(&rep));
    } else {
        println!("{} regime", if rep.inside { "inside" } else { "outside" });
        println!("alpha {}", rep.alpha);
        println!("ratio {} (bound {})", rep.ratio, rep.bound);
        if let Some(r2) = rep.ratio2 {
            println!("ratio2 {r2} (bound 1)");
        }
        if let Some(ex) = rep.exclusion_guaranteed {
            println!(
                "threshold cases exclusive {}",
                if ex { "yes" } else { "no" }
            );
        }
    }
    Ok(())
}

fn cmd_probe(
    cli: &Cli,
    args: &EngineArgs,
    ladder: &[usize],
    runs: usize,
    watch: &[usize],
    jobs: Option<usize>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    with_engine(args, None, |engine| {
        let watch: Vec<usize> = if watch.is_empty() {
            (0..engine.instance().vertex_count()).collect()
        } else {
            watch.to_vec()
        };
        let rep = concentration_probe(engine, ladder, runs, &watch, args.seed, jobs)?;
        if !cli.json {
            for (i, frac) in rep.passing_fraction.iter().enumerate() {
                println!(
                    "q {} -> {}: {:.1}% of vertices shrink by >= {:.3}",
                    ladder[i],
                    ladder[i + 1],
                    100.0 * frac,
                    rep.required[i]
                );
            }
        }
        let (passed, health) = (rep.passed, rep.health.clone());
        let mut report = serde_json::to_value(rep).expect("report serializes");
        report["params"] = engine.params_json();
        report["params"]["instance"] = args.instance.display().to_string().into();
        emit_report(cli, &report, output)?;
        if !health.is_clean() {
            return Err(CliError::Structure(format!("run health: {health:?}")));
        }
        if !passed {
            return Err(statistical("sd did not shrink fast enough"));
        }
        Ok(())
    })
}
