//! Command-line entry point: one subcommand per toolkit surface, with
//! machine-readable output and a fixed default seed so bare invocations are
//! reproducible.
//!
//! Exit codes: 0 success, 1 domain error (bad file, exceeded budget,
//! violated precondition; one line on stderr), 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multigossip::boundary::{self, growth_audit};
use multigossip::expansion::{
    self, check_alpha_feasibility, AlphaRegime, CertStrategy, Verdict, DEFAULT_WORK_BUDGET,
};
use multigossip::experiments::{
    run_experiment, summarize_outcomes, symmetry_test, ExperimentPlan, Family,
};
use multigossip::graph::{self, Diameter, Graph};
use multigossip::protocol::{
    run_from_set_observed, run_trial, Completion, Mode as ProtocolMode, ProtocolConfig,
};
use multigossip::rational::{format_frac, parse_frac, Frac};
use multigossip::seeds::derive_seed;
use multigossip::stats;
use multigossip::NodeSet;

/// Documented fixed default; never derived from the clock.
const DEFAULT_SEED: u64 = 0x00C0_FFEE;

const SCHEMA_PREFIX: &str = "multigossip";

#[derive(Parser)]
#[command(
    name = "multigossip",
    version,
    about = "Multi-call push/pull rumor spreading simulator and vertex-expansion certifier"
)]
struct Cli {
    /// Master seed for all randomized operations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenFamily {
    Complete,
    Er,
    DisjointCliques,
    Path,
    Cycle,
    Star,
    Barbell,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Push,
    Pull,
    PushPull,
}

impl From<CliMode> for ProtocolMode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Push => ProtocolMode::Push,
            CliMode::Pull => ProtocolMode::Pull,
            CliMode::PushPull => ProtocolMode::PushPull,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as an edge list.
    Gen(GenArgs),
    /// Compute or certify small-set vertex expansion.
    Expansion(ExpansionArgs),
    /// Exact diameter, or a sampled lower bound for large graphs.
    Diameter(DiameterArgs),
    /// Run rumor-spreading trials on a graph with full tracing.
    Simulate(SimulateArgs),
    /// Execute an experiment plan (JSON) and summarize every cell.
    Experiment(ExperimentArgs),
    /// Replay a trial and audit boundary buckets and growth.
    Audit(AuditArgs),
    /// Two-sample symmetry test of hitting times S->T vs T->S.
    Symmetry(SymmetryArgs),
    /// Closed-form binomial upper-tail bound.
    Tailbound(TailboundArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Edge probability for family `er`.
    #[arg(long)]
    p: Option<f64>,
    /// Expansion target for family `er`: edge probability becomes 3 phi / n.
    #[arg(long)]
    phi: Option<f64>,
}

#[derive(Args)]
struct ExpansionArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Exact fraction, e.g. 1/4 or 0.25.
    #[arg(long, value_parser = parse_frac_arg)]
    alpha: Frac,
    #[arg(long, value_enum, default_value_t = ExpansionMode::Exact)]
    mode: ExpansionMode,
    /// Subset budget for exact enumeration.
    #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
    budget: u64,
    /// Candidate rounds for sampled falsification.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    /// Optional expansion claim to certify or refute.
    #[arg(long, value_parser = parse_frac_arg)]
    phi: Option<Frac>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExpansionMode {
    Exact,
    Sampled,
}

#[derive(Args)]
struct DiameterArgs {
    #[arg(long)]
    graph: PathBuf,
    /// BFS sources to sample; yields a lower bound instead of the exact
    /// diameter (still detects disconnection exactly).
    #[arg(long)]
    samples: Option<u32>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = CliMode::PushPull)]
    mode: CliMode,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 0)]
    source: u32,
    /// Round cap; derived from n when absent.
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Plan document (JSON mirroring the experiment plan schema).
    #[arg(long)]
    plan: PathBuf,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = CliMode::PushPull)]
    mode: CliMode,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 0)]
    source: u32,
    #[arg(long)]
    cap: Option<u32>,
    /// Growth-audit window length in rounds.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    window: u32,
}

#[derive(Args)]
struct SymmetryArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Start set S as a comma-separated node list, e.g. 0,1,2.
    #[arg(long)]
    s: String,
    /// Target set T as a comma-separated node list.
    #[arg(long)]
    t: String,
    #[arg(long, value_enum, default_value_t = CliMode::PushPull)]
    mode: CliMode,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Significance level of the KS decision.
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long)]
    cap: Option<u32>,
}

#[derive(Args)]
struct TailboundArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    a: f64,
}

fn parse_frac_arg(s: &str) -> Result<Frac, String> {
    parse_frac(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |v| v.get()));
    // Build the worker pool once; every parallel section inherits it.
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .ok();

    let ctx = OutputContext {
        seed: cli.seed,
        threads,
        format: cli.format,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Gen(args) => cmd_gen(&ctx, args),
        Command::Expansion(args) => cmd_expansion(&ctx, args),
        Command::Diameter(args) => cmd_diameter(&ctx, args),
        Command::Simulate(args) => cmd_simulate(&ctx, args),
        Command::Experiment(args) => cmd_experiment(&ctx, args),
        Command::Audit(args) => cmd_audit(&ctx, args),
        Command::Symmetry(args) => cmd_symmetry(&ctx, args),
        Command::Tailbound(args) => cmd_tailbound(&ctx, args),
    }
}

struct OutputContext {
    seed: u64,
    threads: usize,
    format: Format,
    out: Option<PathBuf>,
}

impl OutputContext {
    /// Full resolved configuration embedded in every artifact, enabling
    /// exact re-runs.
    fn config_echo(&self, command: &str, params: Value) -> Value {
        json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "threads": self.threads,
            "params": params,
        })
    }

    fn emit_json(&self, command: &str, params: Value, warnings: &[String], result: Value) -> Result<()> {
        let doc = json!({
            "schema": format!("{SCHEMA_PREFIX}/{command}/v1"),
            "config": self.config_echo(command, params),
            "warnings": warnings,
            "result": result,
        });
        self.write_output(&format!("{}\n", serde_json::to_string_pretty(&doc)?))
    }

    /// Text artifacts carry the same configuration as `#` comment lines, so
    /// generated edge lists remain loadable and CSVs stay self-describing.
    fn emit_text(&self, command: &str, params: Value, warnings: &[String], body: &str) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!("# schema: {SCHEMA_PREFIX}/{command}/v1\n"));
        out.push_str(&format!(
            "# config: {}\n",
            serde_json::to_string(&self.config_echo(command, params))?
        ));
        for w in warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out.push_str(body);
        self.write_output(&out)
    }

    fn write_output(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, content)
                .with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout()
                    .write_all(content.as_bytes())
                    .context("writing stdout")
            }
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("opening graph file {}", path.display()))?;
    graph::load_edge_list(std::io::BufReader::new(file))
        .with_context(|| format!("parsing graph file {}", path.display()))
}

fn parse_node_list(s: &str, n: u32) -> Result<NodeSet> {
    let mut set = NodeSet::new(n);
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let v: u32 = tok
            .parse()
            .map_err(|_| anyhow!("invalid node id `{tok}`"))?;
        if v >= n {
            bail!("node {v} out of range for n = {n}");
        }
        set.insert(v);
    }
    Ok(set)
}

fn diameter_json(d: Diameter) -> Value {
    match d {
        Diameter::Finite(v) => json!(v),
        Diameter::Infinite => json!("infinite"),
    }
}

fn cmd_gen(ctx: &OutputContext, args: &GenArgs) -> Result<()> {
    let (g, family, p_used) = match args.family {
        GenFamily::Complete => (graph::generate_complete(args.n)?, "complete", None),
        GenFamily::DisjointCliques => (
            graph::generate_disjoint_cliques(args.n)?,
            "disjoint_cliques",
            None,
        ),
        GenFamily::Path => (graph::generate_path(args.n)?, "path", None),
        GenFamily::Cycle => (graph::generate_cycle(args.n)?, "cycle", None),
        GenFamily::Star => (graph::generate_star(args.n)?, "star", None),
        GenFamily::Barbell => (graph::generate_barbell(args.n)?, "barbell", None),
        GenFamily::Er => {
            let p = match (args.p, args.phi) {
                (Some(p), None) => p,
                (None, Some(phi)) => 3.0 * phi / args.n as f64,
                _ => bail!("family `er` needs exactly one of --p or --phi"),
            };
            (graph::generate_er(args.n, p, ctx.seed)?, "er", Some(p))
        }
    };
    let params = json!({
        "family": family, "n": args.n, "p": p_used, "phi": args.phi,
    });
    let body = graph::edge_list_string(&g);
    ctx.emit_text("gen", params, &[], &body)
}

fn cmd_expansion(ctx: &OutputContext, args: &ExpansionArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let mut warnings = Vec::new();
    if let Some(phi) = args.phi {
        match check_alpha_feasibility(phi, args.alpha) {
            Ok(AlphaRegime::Impossible) => warnings.push(format!(
                "IMPOSSIBLE regime: alpha {} exceeds 1/(1+phi) for phi {}; no such expander exists",
                format_frac(args.alpha),
                format_frac(phi)
            )),
            Ok(AlphaRegime::Restricted) => warnings.push(
                "RESTRICTED regime: alpha = 1/(1+phi) forces diameter <= 2 and linear min degree"
                    .to_string(),
            ),
            Ok(AlphaRegime::RiskDisconnected) => warnings.push(
                "RISK_DISCONNECTED regime: alpha <= 1/(2+2phi) admits disconnected expanders"
                    .to_string(),
            ),
            Ok(AlphaRegime::Standard) => {}
            Err(e) => bail!(e),
        }
    }

    let strategy = match args.mode {
        ExpansionMode::Exact => CertStrategy::Exact {
            work_budget: args.budget,
        },
        ExpansionMode::Sampled => CertStrategy::Sampled {
            samples: args.samples,
            seed: ctx.seed,
        },
    };

    let params = json!({
        "graph": args.graph.display().to_string(),
        "alpha": format_frac(args.alpha),
        "phi": args.phi.map(format_frac),
        "mode": match args.mode { ExpansionMode::Exact => "exact", ExpansionMode::Sampled => "sampled" },
        "budget": args.budget,
        "samples": args.samples,
    });

    let (report, verdict) = match args.phi {
        Some(phi) => {
            let (verdict, report) = expansion::is_expander(&g, phi, args.alpha, strategy)?;
            (report, Some(verdict))
        }
        None => {
            let report = match strategy {
                CertStrategy::Exact { work_budget } => {
                    expansion::vertex_expansion_exact(&g, args.alpha, work_budget)?
                }
                CertStrategy::Sampled { samples, seed } => {
                    expansion::vertex_expansion_sample(&g, args.alpha, samples, seed)?
                }
            };
            (report, None)
        }
    };

    let mut result = report.to_json();
    if let Some(v) = verdict {
        result["verdict"] = match v {
            Verdict::Certified => json!("CERTIFIED"),
            Verdict::Refuted { witness, ratio } => {
                json!({ "REFUTED": { "witness": witness, "ratio": format_frac(ratio) } })
            }
            Verdict::Unknown => json!("UNKNOWN"),
        };
    }

    match ctx.format {
        Format::Human => {
            let mut body = String::new();
            for w in &warnings {
                body.push_str(&format!("warning: {w}\n"));
            }
            body.push_str(&format!(
                "phi_min = {} over {} sets ({})\nwitness: {:?}\n",
                format_frac(report.phi_min),
                report.sets_examined,
                match report.method {
                    expansion::Method::Exact => "exact",
                    expansion::Method::Sampled => "sampled",
                },
                report.witness
            ));
            if let Some(v) = result.get("verdict") {
                body.push_str(&format!("verdict: {v}\n"));
            }
            ctx.emit_text("expansion", params, &warnings, &body)
        }
        _ => ctx.emit_json("expansion", params, &warnings, result),
    }
}

fn cmd_diameter(ctx: &OutputContext, args: &DiameterArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let params = json!({
        "graph": args.graph.display().to_string(),
        "samples": args.samples,
    });
    let (d, exact) = match args.samples {
        None => (g.diameter(), true),
        Some(s) => (g.diameter_lower_bound(s, ctx.seed), false),
    };
    let result = json!({
        "diameter": diameter_json(d),
        "exact": exact || d == Diameter::Infinite,
        "n": g.node_count(),
        "edges": g.edge_count(),
        "min_degree": g.min_degree(),
    });
    match ctx.format {
        Format::Human => ctx.emit_text(
            "diameter",
            params,
            &[],
            &format!("diameter{} = {d}\n", if exact { "" } else { " >=" }),
        ),
        _ => ctx.emit_json("diameter", params, &[], result),
    }
}

fn cmd_simulate(ctx: &OutputContext, args: &SimulateArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let cap = args.cap.unwrap_or_else(|| ProtocolConfig::default_round_cap(g.node_count()));
    let cfg = ProtocolConfig::new(args.mode.into(), args.k, cap, ctx.seed)?;
    let params = json!({
        "graph": args.graph.display().to_string(),
        "mode": serde_json::to_value(cfg.mode)?,
        "k": args.k, "cap": cap, "source": args.source, "trials": args.trials,
    });

    if args.trials == 1 {
        let trial = run_trial(&g, args.source, &cfg)?;
        return match ctx.format {
            Format::Csv => ctx.emit_text("simulate", params, &[], &trial.trace_csv()),
            Format::Human => {
                let line = match trial.completion {
                    Completion::Completed(r) => format!("completed in {r} rounds\n"),
                    Completion::Censored(c) => format!(
                        "censored at {c} rounds with {} of {} informed\n",
                        trial.final_informed, trial.n
                    ),
                };
                ctx.emit_text("simulate", params, &[], &line)
            }
            Format::Json => ctx.emit_json("simulate", params, &[], serde_json::to_value(&trial)?),
        };
    }

    let outcomes: Vec<Completion> = (0..args.trials)
        .map(|i| {
            let c = cfg.with_seed(derive_seed(ctx.seed, &[i as u64]));
            run_trial(&g, args.source, &c).map(|t| t.completion)
        })
        .collect::<Result<_, _>>()?;
    let summary = summarize_outcomes(Family::File, g.node_count(), args.k, None, None, &outcomes);
    match ctx.format {
        Format::Human => {
            let line = match summary.mean {
                Some(m) => format!(
                    "mean rounds {m:.3} over {} trials ({} censored)\n",
                    args.trials, summary.censored
                ),
                None => format!("all {} trials censored\n", args.trials),
            };
            ctx.emit_text("simulate", params, &[], &line)
        }
        _ => ctx.emit_json("simulate", params, &[], serde_json::to_value(&summary)?),
    }
}

fn cmd_experiment(ctx: &OutputContext, args: &ExperimentArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.plan)
        .with_context(|| format!("reading plan {}", args.plan.display()))?;
    let plan: ExperimentPlan =
        serde_json::from_str(&text).with_context(|| format!("parsing plan {}", args.plan.display()))?;
    let summary = run_experiment(&plan)?;
    let params = json!({
        "plan_file": args.plan.display().to_string(),
        "plan": serde_json::to_value(&plan)?,
    });
    match ctx.format {
        Format::Csv => ctx.emit_text("experiment", params, &[], &summary.to_csv()),
        Format::Human => {
            let mut body = String::new();
            for c in &summary.cells {
                body.push_str(&format!(
                    "n={} k={} phi={:?}: mean={:?} censored={}\n",
                    c.n, c.k, c.phi, c.mean, c.censored
                ));
            }
            ctx.emit_text("experiment", params, &[], &body)
        }
        Format::Json => ctx.emit_json("experiment", params, &[], serde_json::to_value(&summary)?),
    }
}

fn cmd_audit(ctx: &OutputContext, args: &AuditArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let cap = args.cap.unwrap_or_else(|| ProtocolConfig::default_round_cap(g.node_count()));
    let cfg = ProtocolConfig::new(args.mode.into(), args.k, cap, ctx.seed)?;
    let params = json!({
        "graph": args.graph.display().to_string(),
        "mode": serde_json::to_value(cfg.mode)?,
        "k": args.k, "cap": cap, "source": args.source, "window": args.window,
    });

    let start = NodeSet::singleton(g.node_count(), args.source);
    let mut bucket_csv = String::from("t,i,d_i,bucket_size,volume,in_good_set,regime,s_t\n");
    let mut rounds = Vec::new();
    let trial = run_from_set_observed(&g, &start, Some(args.source), &cfg, |t, informed| {
        let partition = boundary::partition_boundary(&g, informed);
        let regimes = boundary::classify_regimes(&partition, args.k);
        let s_t = g.node_count() - informed.len() - partition.boundary_size();
        for (&i, bucket) in &partition.buckets {
            bucket_csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                t,
                i,
                boundary::bucket_floor(i),
                bucket.len(),
                partition.volumes[&i],
                partition.is_good(i),
                regimes[&i],
                s_t,
            ));
        }
        rounds.push(json!({
            "t": t,
            "informed": informed.len(),
            "boundary": partition.boundary_size(),
            "s_t": s_t,
            "good_indices": partition.good_indices,
            "half_boundary_ok": boundary::check_half_boundary(&partition),
        }));
    })?;
    let audit = growth_audit(&trial, args.k, args.window);

    match ctx.format {
        Format::Csv => ctx.emit_text("audit", params, &[], &bucket_csv),
        _ => {
            let result = json!({
                "completion": serde_json::to_value(trial.completion)?,
                "rounds": rounds,
                "growth": serde_json::to_value(&audit)?,
            });
            ctx.emit_json("audit", params, &[], result)
        }
    }
}

fn cmd_symmetry(ctx: &OutputContext, args: &SymmetryArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let s = parse_node_list(&args.s, g.node_count())?;
    let t = parse_node_list(&args.t, g.node_count())?;
    let cap = args.cap.unwrap_or_else(|| ProtocolConfig::default_round_cap(g.node_count()));
    let cfg = ProtocolConfig::new(args.mode.into(), args.k, cap, ctx.seed)?;
    let report = symmetry_test(&g, &s, &t, &cfg, args.trials, args.alpha)?;
    let params = json!({
        "graph": args.graph.display().to_string(),
        "s": s.to_vec(), "t": t.to_vec(),
        "mode": serde_json::to_value(cfg.mode)?,
        "k": args.k, "trials": args.trials, "alpha": args.alpha, "cap": cap,
    });
    match ctx.format {
        Format::Human => ctx.emit_text(
            "symmetry",
            params,
            &[],
            &format!(
                "{}: KS statistic {:.5} vs critical {:.5}\n",
                if report.consistent { "CONSISTENT" } else { "INCONSISTENT" },
                report.ks.statistic,
                report.ks.critical
            ),
        ),
        _ => ctx.emit_json("symmetry", params, &[], serde_json::to_value(&report)?),
    }
}

fn cmd_tailbound(ctx: &OutputContext, args: &TailboundArgs) -> Result<()> {
    let bound = stats::binomial_tail_bound(args.n, args.p, args.a)?;
    let params = json!({ "n": args.n, "p": args.p, "a": args.a });
    match ctx.format {
        Format::Human => ctx.emit_text(
            "tailbound",
            params,
            &[],
            &format!("P[B({}, {}) >= {}n] <= {bound}\n", args.n, args.p, args.a),
        ),
        _ => ctx.emit_json("tailbound", params, &[], json!({ "bound": bound })),
    }
}
