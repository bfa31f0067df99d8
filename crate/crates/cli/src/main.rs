mod bench;
mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fdspan",
    version,
    about = "Build and verify subgraphs that survive bounded-degree edge faults"
)]
struct Cli {
    /// TOML file with defaults (seed, phi, A, B, c_sample, ...).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Leave runtime fields out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    omit_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write it as an edge list with a JSON manifest.
    Gen(GenArgs),
    /// Build a spanner or connectivity certificate.
    Build(BuildArgs),
    /// Check a subgraph against fault sets.
    Verify(VerifyArgs),
    /// Solve one min-max length-bounded cut instance.
    Lbc(LbcArgs),
    /// Run a benchmark suite across seeds.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gnp,
    Regular,
    Blowup,
    Hypercube,
    Named,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Degree (regular) or dimension (hypercube).
    #[arg(long)]
    d: Option<usize>,
    /// Blow-up factor or hypercube alphabet size.
    #[arg(long)]
    f: Option<usize>,
    /// Base graph name for blow-ups.
    #[arg(long)]
    base: Option<String>,
    /// Graph name: petersen, heawood, cycle-N, complete-N, path-N.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Edge-list path; the manifest goes to `<out>.manifest.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    GreedyExact,
    GreedyApprox,
    Cluster3,
    Certificate,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    graph: PathBuf,
    /// Stretch parameter; spanners have stretch 2k−1.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Keep-threshold multiplier for greedy-approx.
    #[arg(long = "B")]
    b: Option<f64>,
    /// Rounding scale for greedy-approx.
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long)]
    retries: Option<usize>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    c_deg: Option<f64>,
    /// Asymptotic constants `φ = 1/ln² n`, `f′ = ⌈f/φ⁵⌉` (forces the output to be the input at any practical size).
    #[arg(long, visible_alias = "paper-constants")]
    theory_constants: bool,
    #[arg(long)]
    c_sample: Option<f64>,
    /// Largest input accepted by greedy-exact.
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output edge list.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report path (stdout if absent).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Blocking-set JSON path (greedy only).
    #[arg(long)]
    blocking: Option<PathBuf>,
    /// Verify the output on this many sampled fault sets.
    #[arg(long, default_value_t = 0)]
    check_samples: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Spanner,
    Certificate,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sampled,
    Adversarial,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryFamily {
    Blowup,
    Hypercube,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Subgraph edge list on the same nodes.
    #[arg(long)]
    sub: PathBuf,
    #[arg(long, value_enum, default_value = "spanner")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "sampled")]
    mode: Mode,
    /// Stretch (spanner checks).
    #[arg(long, default_value_t = 3.0)]
    t: f64,
    #[arg(long, default_value_t = 1)]
    f: u32,
    #[arg(long)]
    samples: Option<usize>,
    /// Per-edge inclusion probability when sampling fault sets.
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Check a single fault set from this file instead of sampling.
    #[arg(long)]
    faults: Option<PathBuf>,
    /// Lower-bound family for adversarial mode.
    #[arg(long, value_enum)]
    family: Option<AdversaryFamily>,
    /// Blow-up factor or hypercube alphabet of the input.
    #[arg(long)]
    family_f: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LbcMode {
    Exact,
    Lp,
    Approx,
}

#[derive(Args, Debug)]
pub struct LbcArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    u: usize,
    #[arg(long)]
    v: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "approx")]
    mode: LbcMode,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long)]
    retries: Option<usize>,
    #[arg(long)]
    max_universe: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// lbc-ratio, blowup-exactness or robustness.
    suite: String,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Writes `<out>.csv` and `<out>.json`; JSON goes to stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let ctx = match commands::Context::new(cli.config.as_deref(), cli.omit_timing) {
        Ok(ctx) => ctx,
        Err(err) => return report::fail(&err),
    };
    let outcome = match cli.command {
        Command::Gen(args) => commands::gen(&ctx, args),
        Command::Build(args) => commands::build(&ctx, args),
        Command::Verify(args) => commands::verify(&ctx, args),
        Command::Lbc(args) => commands::lbc(&ctx, args),
        Command::Bench(args) => bench::run(&ctx, args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => report::fail(&err),
    }
}
