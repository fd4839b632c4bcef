//! `graphtropy` command line front end.
//!
//! Exit codes: 0 on success, 1 when the computation itself fails (infeasible
//! constraint, search budget exhausted, ...), 2 for unreadable or malformed
//! input and bad arguments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "graphtropy", version, about = "Graphtropy of distinction graphs and related tools")]
struct Cli {
    /// Output format; simulations default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graphtropy of a graph file.
    Compute(InputArg),
    /// h(G|H).
    Conditional(TwoGraphs),
    /// h(G;H).
    Mutual(TwoGraphs),
    /// Co-normal product of two graphs.
    Product(TwoGraphs),
    /// Disjoint union of two graphs.
    Union(TwoGraphs),
    /// Partition view of a partition graph, or of a partition given by cell sizes.
    Partition(PartitionArgs),
    /// Weighted graphtropy, optionally checking an ε-automorphism.
    Weighted(WeightedArgs),
    /// Reference-pair graphtropies of a graph-pair distribution.
    Dist(DistArgs),
    #[command(subcommand)]
    Thermo(ThermoCommand),
    #[command(subcommand)]
    Algoinfo(AlgoCommand),
    #[command(subcommand)]
    Secondlaw(SecondLawCommand),
    #[command(subcommand)]
    Mep(MepCommand),
    #[command(subcommand)]
    Ddg(DdgCommand),
    #[command(subcommand)]
    Quantum(QuantumCommand),
}

#[derive(Debug, Args)]
pub struct InputArg {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct TwoGraphs {
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub h: PathBuf,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, conflicts_with = "sizes", required_unless_present = "sizes")]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct WeightedArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Permutation as node indices, `perm[u]` being the image of `u`.
    #[arg(long, value_delimiter = ',', requires = "eps")]
    pub perm: Option<Vec<usize>>,
    /// ε₁,ε₂,ε₃.
    #[arg(long, value_delimiter = ',', requires = "perm")]
    pub eps: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Reference pair on the x side, as two node ids.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<String>>,
    /// Reference pair on the y side, as two node ids.
    #[arg(long, value_delimiter = ',')]
    pub y: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum ThermoCommand {
    /// Automorphism count, microstate entropy and orbits.
    Autos(InputArg),
    /// Maximum-likelihood node weightings.
    Maxlik(MaxlikArgs),
    /// Gibbs reference distribution over partition cells.
    Gibbs(GibbsArgs),
    /// Weighted automorphism distance.
    Wdist(WdistArgs),
}

#[derive(Debug, Args)]
pub struct MaxlikArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alphabet: Vec<i64>,
    /// Required sum of node weights.
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    /// none, partition, maxdeg:M, or graphtropy:TARGET:TOL.
    #[arg(long, default_value = "none")]
    pub structure: String,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
}

#[derive(Debug, Args)]
pub struct WdistArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Average over all permutations instead of the support graph's automorphisms.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Subcommand)]
pub enum AlgoCommand {
    /// Closed-form predicted graphtropy.
    Predict(PredictArgs),
    /// Bounded-observer simulation, one row per K.
    Simulate(SimulateArgs),
    /// Graph energy of a list of node weights.
    Energy(EnergyArgs),
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long, required_unless_present_all = ["s", "d"], conflicts_with_all = ["s", "d"])]
    pub m: Option<u64>,
    #[arg(long, requires = "d", allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, requires = "s", allow_negative_numbers = true)]
    pub d: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub states: usize,
    #[arg(long, default_value_t = 32)]
    pub bits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Vec<i64>,
}

#[derive(Debug, Subcommand)]
pub enum SecondLawCommand {
    /// Memory graph of a perfect observer.
    Run(SecondLawArgs),
    /// Memory graph of an observer that forgets.
    Forget(ForgetArgs),
}

#[derive(Debug, Args)]
pub struct SecondLawArgs {
    #[arg(long, default_value_t = 6)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub flip: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ForgetArgs {
    #[command(flatten)]
    pub run: SecondLawArgs,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub forget: f64,
}

#[derive(Debug, Subcommand)]
pub enum MepCommand {
    /// Ternary-event partition refinement.
    Run(MepArgs),
}

#[derive(Debug, Args)]
pub struct MepArgs {
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    #[arg(long, default_value_t = 50)]
    pub events: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum DdgCommand {
    /// Advance a DDG and print the resulting DDG.
    Step(DdgStepArgs),
    /// Mine causal rules from a trace.
    Mine(MineArgs),
    /// Distinction graph over stimulus categories as seen by an observer DDG.
    Observe(ObserveArgs),
    /// Node complexity of every node.
    Complexity(InputArg),
    /// Compile quantum causal links into a matrix.
    Quantum(QuantumLinksArgs),
    /// Generate a DDG with planted rules and its trace.
    Plant(PlantArgs),
}

#[derive(Debug, Args)]
pub struct DdgStepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Outside change applied in the first step, as `from,to,amount`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub push: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
    pub min_confidence: f64,
    #[arg(long, default_value_t = 3)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 3)]
    pub min_support: usize,
}

#[derive(Debug, Args)]
pub struct ObserveArgs {
    /// Observer DDG.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub stimuli: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct QuantumLinksArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Amplitude vector to apply, as a JSON array of `[re, im]` pairs.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlantArgs {
    #[arg(long, default_value_t = 2)]
    pub rules: usize,
    #[arg(long, default_value_t = 3)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 200)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum QuantumCommand {
    /// Quantum logical entropy of a density matrix.
    Purity(PurityArgs),
    /// Graphs with the most action-preserving automorphisms.
    Quangraph(QuangraphArgs),
}

#[derive(Debug, Args)]
pub struct PurityArgs {
    #[arg(long)]
    pub rho: PathBuf,
}

#[derive(Debug, Args)]
pub struct QuangraphArgs {
    #[arg(long)]
    pub actions: PathBuf,
    /// Expected action as `re,im`; defaults to the file's value, then to the
    /// assignment's own expectation.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub expected: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub tol: f64,
    /// Match actions within this distance instead of exactly.
    #[arg(long, allow_negative_numbers = true)]
    pub action_tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command, cli.format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
