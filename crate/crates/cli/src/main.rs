//! `dynproof`: generate graphs, search for and verify stable-set bound
//! proofs, train the Q-network and run benchmark tables.

mod bench;
mod graph_spec;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynproof::agent::{
    actions_from_trace, c7_reference_trace, train, GreedyPolicy, RandomPolicy, ReplayPolicy, SequentialCliquePolicy,
    TrainConfig, LOG_HEADER,
};
use dynproof::env::{
    parse_proof_text, render_proof, run_episode, verify, EnvError, Policy, ProofTrace, VerificationReport,
};
use dynproof::features::build_class_table;
use dynproof::graphs::{io as graph_io, max_stable_set, Graph};
use dynproof::hierarchy::{solve_level_with, verify_static_certificate, LevelOptions, StaticCertificate};
use dynproof::qnet::NetError;
use dynproof::rng::{stream, sub_seed};
use dynproof::{Error, ParseError, QNetwork64};
use thiserror::Error as ThisError;

use bench::{Agent, BenchSettings};
use manifest::RunManifest;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 rejected certificate, 3 resource budget, 4 malformed input.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 4,
            CliError::Core(e) if e.is_verification_failure() => 2,
            CliError::Core(e) if e.is_resource_limit() => 3,
            CliError::Core(
                Error::Parse(_)
                | Error::Io(_)
                | Error::Graph(_)
                | Error::Env(EnvError::IllegalAction(_))
                | Error::Net(NetError::HashMismatch { .. } | NetError::Format(_) | NetError::InputWidth { .. } | NetError::Io(_)),
            ) => 4,
            CliError::Core(_) => 1,
        }
    }
}

macro_rules! into_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

into_core!(
    ParseError,
    std::io::Error,
    dynproof::env::VerifyError,
    dynproof::env::EnvError,
    dynproof::hierarchy::HierarchyError,
    dynproof::graphs::GraphError,
    dynproof::features::FeatureError,
    NetError
);

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "dynproof", version, about = "Dynamic and static proofs of stable-set bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as DIMACS or JSON.
    GenGraph(GenGraphArgs),
    /// Run one proof episode and emit the verified trace.
    Prove(ProveArgs),
    /// Solve one level of the static hierarchy.
    Static(StaticArgs),
    /// Check a trace (JSON or text listing) or a static certificate.
    Verify(VerifyArgs),
    /// Exact stability number by branch and bound.
    Alpha(AlphaArgs),
    /// Train a Q-network.
    Train(TrainArgs),
    /// Mean bounds per graph size for agents and hierarchy levels.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Random,
    Complete,
    Cycle,
    Petersen,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dimacs,
    Json,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long, value_enum)]
    kind: GraphKind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dimacs)]
    format: GraphFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProveAgent {
    Random,
    Scripted,
    /// Replays the 10-step C7 proof; only valid on `cycle7`.
    #[value(name = "scripted-table2")]
    ScriptedTable2,
    Model,
}

/// Graph name (`cycle7`, `k5`, `complete6`, `petersen`) or DIMACS/JSON file.
#[derive(Args)]
struct GraphArg {
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum, default_value_t = ProveAgent::Random)]
    agent: ProveAgent,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 2)]
    degree_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace JSON; printed to stdout when absent and `--pretty` is off.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the text listing.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct StaticArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    level: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = LevelOptions::default().generator_limit)]
    generator_limit: usize,
    #[arg(long, default_value_t = LevelOptions::default().pivot_limit)]
    pivot_limit: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    proof: PathBuf,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    graph: GraphArg,
}

#[derive(Args)]
struct TrainArgs {
    /// `key = value` lines; flags below override the file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    /// Model file.
    #[arg(long)]
    out: PathBuf,
    /// Per-episode CSV log.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "15")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Any of random, scripted, model; empty for static levels only.
    #[arg(long, value_delimiter = ',', default_value = "random")]
    agents: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    levels: Vec<usize>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    #[arg(long, default_value_t = 100)]
    horizon: usize,
    #[arg(long, default_value_t = 2)]
    degree_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = LevelOptions::default().generator_limit)]
    generator_limit: usize,
    #[arg(long, default_value_t = LevelOptions::default().pivot_limit)]
    pivot_limit: u64,
    /// Summary CSV, one row per size.
    #[arg(long)]
    out: PathBuf,
    /// Per-instance CSV.
    #[arg(long)]
    detail: Option<PathBuf>,
    /// Directory for every trace and certificate behind the table.
    #[arg(long)]
    certs_dir: Option<PathBuf>,
}

fn write_output(path: &Path, text: &str, manifest: &mut RunManifest) -> CliResult {
    std::fs::write(path, text)?;
    manifest.output(path)?;
    Ok(())
}

fn load_model(path: &Path, degree_cap: usize) -> CliResult<(QNetwork64, dynproof::features::TripletClassTable)> {
    let table = build_class_table(degree_cap)?;
    let (net, _) = QNetwork64::load(path, Some(&table.fingerprint()))?;
    Ok((net, table))
}

fn gen_graph(a: GenGraphArgs) -> CliResult {
    let mut manifest = RunManifest::start("gen-graph");
    let g = match a.kind {
        GraphKind::Random => {
            if !(0.0..=1.0).contains(&a.p) {
                return Err(CliError::Usage(format!("p must lie in [0, 1], got {}", a.p)));
            }
            Graph::random_gnp(a.n, a.p, sub_seed(a.seed, "graph"))
        }
        GraphKind::Complete => Graph::complete(a.n),
        GraphKind::Cycle if a.n < 3 => return Err(CliError::Usage("cycle needs n >= 3".into())),
        GraphKind::Cycle => Graph::cycle(a.n),
        GraphKind::Petersen => Graph::petersen(),
    };
    let text = match a.format {
        GraphFormat::Dimacs => graph_io::to_dimacs(&g),
        GraphFormat::Json => graph_io::to_json(&g) + "\n",
    };
    manifest.config("n", g.n()).config("p", a.p).seed(a.seed, &["graph"]);
    match a.out {
        Some(path) => {
            write_output(&path, &text, &mut manifest)?;
            manifest.finish(&RunManifest::path_for(&path))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn prove(a: ProveArgs) -> CliResult {
    let g = graph_spec::resolve(&a.graph.graph)?;
    let mut manifest = RunManifest::start("prove");
    manifest
        .config("graph", &a.graph.graph)
        .config("agent", a.agent.to_possible_value().expect("no skipped variants").get_name())
        .config("steps", a.steps)
        .config("degree_cap", a.degree_cap)
        .seed(a.seed, &["agent"]);
    let model = match (a.agent, &a.model) {
        (ProveAgent::Model, Some(path)) => {
            manifest.config("model", path.display()).config("model_sha256", manifest::sha256_file(path)?);
            Some(load_model(path, a.degree_cap)?)
        }
        (ProveAgent::Model, None) => return Err(CliError::Usage("--agent model needs --model".into())),
        _ => None,
    };
    let mut policy: Box<dyn Policy + '_> = match a.agent {
        ProveAgent::Random => Box::new(RandomPolicy {
            rng: stream(a.seed, "agent"),
        }),
        ProveAgent::Scripted => Box::new(SequentialCliquePolicy::new()),
        ProveAgent::ScriptedTable2 => {
            let reference = c7_reference_trace();
            if g != reference.graph {
                return Err(CliError::Usage("scripted-table2 only applies to cycle7".into()));
            }
            Box::new(ReplayPolicy::new(actions_from_trace(&reference)))
        }
        ProveAgent::Model => {
            let (net, table) = model.as_ref().unwrap();
            Box::new(GreedyPolicy::new(net, table))
        }
    };
    let outcome = run_episode(&g, policy.as_mut(), a.degree_cap, a.steps)?;
    let report = verify(&outcome.trace)?;
    eprintln!(
        "bound {} ({} episode steps, {} proof steps, verified)",
        report.bound,
        outcome.rewards.len(),
        report.steps
    );
    let json = outcome.trace.to_json();
    if a.pretty {
        print!("{}", render_proof(&outcome.trace));
    }
    match a.out {
        Some(path) => {
            write_output(&path, &json, &mut manifest)?;
            manifest.finish(&RunManifest::path_for(&path))?;
        }
        None if !a.pretty => println!("{json}"),
        None => {}
    }
    Ok(())
}

fn static_level(a: StaticArgs) -> CliResult {
    let g = graph_spec::resolve(&a.graph.graph)?;
    let mut manifest = RunManifest::start("static");
    manifest
        .config("graph", &a.graph.graph)
        .config("level", a.level)
        .config("generator_limit", a.generator_limit)
        .config("pivot_limit", a.pivot_limit);
    let options = LevelOptions {
        generator_limit: a.generator_limit,
        pivot_limit: a.pivot_limit,
    };
    let sol = solve_level_with(&g, a.level, options)?;
    let report = verify_static_certificate(&sol.certificate)?;
    eprintln!(
        "level {} bound {} (pairs {}, columns {}, rows {}, pivots {}, verified)",
        a.level, report.bound, sol.size.pairs, sol.size.columns, sol.size.rows, sol.pivots
    );
    let json = sol.certificate.to_json();
    match a.out {
        Some(path) => {
            write_output(&path, &json, &mut manifest)?;
            manifest.finish(&RunManifest::path_for(&path))?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

enum Certificate {
    Trace(ProofTrace),
    Static(StaticCertificate),
}

/// JSON is told apart by its `format` field; anything else must be a text
/// listing.
fn read_certificate(text: &str) -> CliResult<Certificate> {
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text).map_err(ParseError::from)?;
        match value.get("format").and_then(|f| f.as_str()) {
            Some("dynproof-static") => Ok(Certificate::Static(StaticCertificate::from_json(text)?)),
            Some("dynproof-trace") => Ok(Certificate::Trace(ProofTrace::from_json(text)?)),
            other => Err(CliError::Usage(format!("unknown certificate format {other:?}"))),
        }
    } else {
        Ok(Certificate::Trace(parse_proof_text(text)?))
    }
}

fn verify_cmd(a: VerifyArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.proof)?;
    let (kind, report): (&str, VerificationReport) = match read_certificate(&text)? {
        Certificate::Trace(t) => ("trace", verify(&t)?),
        Certificate::Static(c) => ("static", verify_static_certificate(&c)?),
    };
    println!(
        "OK {kind} bound {} steps {} terms {}",
        report.bound, report.steps, report.combination_terms
    );
    Ok(())
}

fn alpha(a: AlphaArgs) -> CliResult {
    let g = graph_spec::resolve(&a.graph.graph)?;
    let (alpha, set) = max_stable_set(&g)?;
    let nodes: Vec<String> = set.iter().map(|v| (v + 1).to_string()).collect();
    println!("alpha {alpha}");
    println!("stable set {}", nodes.join(" "));
    Ok(())
}

fn train_cmd(a: TrainArgs) -> CliResult {
    let mut config = match &a.config {
        Some(path) => TrainConfig::parse(&std::fs::read_to_string(path)?)?,
        None => TrainConfig::default(),
    };
    for kv in &a.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected KEY=VALUE, got {kv:?}")))?;
        config.set(k.trim(), v.trim())?;
    }
    if let Some(v) = a.steps {
        config.total_steps = v;
    }
    if let Some(v) = a.seed {
        config.seed = v;
    }
    if let Some(v) = a.width {
        config.width = v;
    }
    if let Some(v) = a.lr {
        config.lr = v;
    }
    config.validate()?;
    let mut manifest = RunManifest::start("train");
    for (k, v) in config.to_map() {
        manifest.config(&k, v);
    }
    manifest.seed(config.seed, &["init", "graph", "agent", "replay"]);
    let table = build_class_table(config.degree_cap)?;
    let mut log = String::from(LOG_HEADER);
    let outcome = train::<f64>(&config, &table, |e| {
        log.push_str(&e.csv_row());
        if e.episode % 50 == 0 {
            eprintln!("step {} episode {} final bound {}", e.step, e.episode, e.final_bound);
        }
    })?;
    outcome.net.save(&a.out, &config.to_map())?;
    manifest.output(&a.out)?;
    if let Some(path) = &a.log {
        write_output(path, &log, &mut manifest)?;
    }
    eprintln!("{} episodes, model written to {}", outcome.episodes.len(), a.out.display());
    manifest.finish(&RunManifest::path_for(&a.out))?;
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> CliResult {
    let agents = a
        .agents
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| match s.as_str() {
            "random" => Ok(Agent::Random),
            "scripted" => Ok(Agent::Scripted),
            "model" => Ok(Agent::Model),
            other => Err(CliError::Usage(format!("unknown agent {other:?}"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    if a.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    if !(0.0 <= a.p_min && a.p_min <= a.p_max && a.p_max <= 1.0) {
        return Err(CliError::Usage("need 0 <= p-min <= p-max <= 1".into()));
    }
    let mut manifest = RunManifest::start("bench");
    let model = match (&a.model, agents.contains(&Agent::Model)) {
        (Some(path), true) => {
            manifest.config("model", path.display()).config("model_sha256", manifest::sha256_file(path)?);
            Some(load_model(path, a.degree_cap)?)
        }
        (None, true) => return Err(CliError::Usage("agent model needs --model".into())),
        _ => None,
    };
    if let Some(dir) = &a.certs_dir {
        std::fs::create_dir_all(dir)?;
    }
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    manifest
        .config("sizes", join(&a.sizes))
        .config("count", a.count)
        .config("agents", a.agents.join(","))
        .config("levels", join(&a.levels))
        .config("p_min", a.p_min)
        .config("p_max", a.p_max)
        .config("horizon", a.horizon)
        .config("degree_cap", a.degree_cap)
        .config("generator_limit", a.generator_limit)
        .config("pivot_limit", a.pivot_limit)
        .seed(a.seed, &["graph", "agent"]);
    let settings = BenchSettings {
        sizes: a.sizes.clone(),
        count: a.count,
        p_min: a.p_min,
        p_max: a.p_max,
        agents,
        levels: a.levels.clone(),
        horizon: a.horizon,
        degree_cap: a.degree_cap,
        seed: a.seed,
        model: model.as_ref().map(|(n, t)| (n, t)),
        level_options: LevelOptions {
            generator_limit: a.generator_limit,
            pivot_limit: a.pivot_limit,
        },
        certs_dir: a.certs_dir.as_deref(),
    };
    let out = bench::run(&settings)?;
    print!("{}", out.summary);
    write_output(&a.out, &out.summary, &mut manifest)?;
    if let Some(path) = &a.detail {
        write_output(path, &out.detail, &mut manifest)?;
    }
    manifest.finish(&RunManifest::path_for(&a.out))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenGraph(a) => gen_graph(a),
        Command::Prove(a) => prove(a),
        Command::Static(a) => static_level(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Alpha(a) => alpha(a),
        Command::Train(a) => train_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
