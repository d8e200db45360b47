//! Command-line surface. Every experiment shares the global flags;
//! subcommands only add their own parameters.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cutlab", version, about = "Cut gadget and local estimator experiments")]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Globals {
    /// Master seed; per-trial and per-cell seeds derive from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Constant preset to start from.
    #[arg(long, global = true, value_enum, default_value_t = PresetChoice::Desk)]
    pub preset: PresetChoice,
    /// key=value lines overriding individual preset constants.
    #[arg(long, global = true, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps; 0 means one per core.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Fill the wall_ms field on records (off keeps output byte-stable).
    #[arg(long, global = true, default_value_t = false)]
    pub timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetChoice {
    Desk,
    Paper,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decodable-pair encodings: one recoverable bit per weighted pair.
    Foreach {
        #[command(subcommand)]
        action: ForeachAction,
    },
    /// Gap-threshold encodings decoded by subset enumeration.
    Forall {
        #[command(subcommand)]
        action: ForallAction,
    },
    /// Local-query min cut estimation.
    Mincut {
        #[command(subcommand)]
        action: MincutAction,
    },
    /// Set-disjointness counting via cut gadgets.
    Twosum {
        #[command(subcommand)]
        action: TwosumAction,
    },
    /// Cross-product driver: run any record-producing command over a grid.
    Sweep(SweepArgs),
    /// Run the built-in verification suite.
    Selftest {
        /// Skip the long estimator scaling regression.
        #[arg(long, default_value_t = false)]
        quick: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ForeachAction {
    /// Build the encoding and report erasures without decoding.
    Encode(ForeachArgs),
    /// Decode every capacity bit through the chosen oracle.
    Decode(ForeachArgs),
    /// Encode then decode in one pass.
    Roundtrip(ForeachArgs),
}

#[derive(Copy, Clone, Debug)]
pub enum ForeachMode {
    Encode,
    Decode,
    Roundtrip,
}

#[derive(Args, Debug)]
pub struct ForeachArgs {
    /// Level count; blocks hold sqrt(beta) * 2^k vertices.
    #[arg(long)]
    pub k: u32,
    /// Balance parameter; must be a perfect square.
    #[arg(long)]
    pub beta: u64,
    /// Vertex count; a multiple of the block size.
    #[arg(long)]
    pub n: usize,
    /// Weight separation constant; defaults to the preset value.
    #[arg(long)]
    pub c1: Option<f64>,
    /// exact | noise:<eps'>[:fresh|hashed|signs=<+-..>] | sparsifier:<p>
    #[arg(long, default_value = "exact")]
    pub oracle: String,
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
}

#[derive(Subcommand, Debug)]
pub enum ForallAction {
    /// Sample a promise instance, encode it, decode through the oracle.
    Roundtrip(ForallArgs),
}

#[derive(Args, Debug)]
pub struct ForallArgs {
    /// Per-string length within a block; must be even.
    #[arg(long)]
    pub d: usize,
    /// Balance parameter (strings per block).
    #[arg(long)]
    pub beta: usize,
    /// Vertex count; a multiple of beta * d.
    #[arg(long)]
    pub n: usize,
    /// Gap constant; defaults to the preset value.
    #[arg(long)]
    pub c: Option<f64>,
    /// exact | noise:<eps'>[:fresh|hashed|signs=<+-..>] | sparsifier:<p>
    #[arg(long, default_value = "exact")]
    pub oracle: String,
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
}

#[derive(Subcommand, Debug)]
pub enum MincutAction {
    /// Estimate the min cut of a graph file via local queries.
    Estimate(MincutEstimateArgs),
    /// Grid of synthetic instances; emits CSV.
    Sweep(MincutSweepArgs),
}

#[derive(Args, Debug)]
pub struct MincutEstimateArgs {
    /// Edge list: header "n <count> undirected", then one "u v" per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Relative accuracy target.
    #[arg(long)]
    pub eps: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    /// Cycle of girth-k blocks plus random chords; planted cut k.
    CycleChords,
    /// Two cliques joined by a single bridge edge; cut 1.
    CliqueBridge,
}

#[derive(Args, Debug)]
pub struct MincutSweepArgs {
    #[arg(long, value_enum, default_value_t = SweepFamily::CycleChords)]
    pub family: SweepFamily,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Planted cut values (cycle-chords only), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub k: Vec<usize>,
    /// Accuracy targets, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    /// Repetitions per cell with distinct seeds.
    #[arg(long, default_value_t = 1)]
    pub runs: u32,
    /// Edge budget per vertex for cycle-chords instances.
    #[arg(long, default_value_t = 8)]
    pub density: usize,
}

#[derive(Subcommand, Debug)]
pub enum TwosumAction {
    /// Test the gadget cut identity on string pairs.
    LemmaCheck(TwosumLemmaArgs),
    /// Solve a counting instance through a min cut estimator.
    Reduce(TwosumReduceArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("mode").required(true).multiple(false))]
pub struct TwosumLemmaArgs {
    /// String length; must be a perfect square.
    #[arg(long = "N")]
    pub n: usize,
    /// Enumerate every pair with intersection at most one (N <= 9).
    #[arg(long, group = "mode")]
    pub exhaustive: bool,
    /// Sample this many random pairs instead.
    #[arg(long, group = "mode")]
    pub trials: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TwosumReduceArgs {
    /// Number of set pairs.
    #[arg(long)]
    pub t: usize,
    /// Ground-set size per pair; must be a perfect square.
    #[arg(long = "L")]
    pub len: usize,
    /// Gadget weight multiplier.
    #[arg(long)]
    pub alpha: usize,
    /// Intersection bound used when sampling the instance.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Accuracy parameter; pairs per instance is 1/eps^2.
    #[arg(long)]
    pub eps: f64,
    /// exact | local | local:desk | local:paper
    #[arg(long, default_value = "exact")]
    pub algo: String,
    /// Estimator runs per reduction call (median wins); preset default.
    #[arg(long)]
    pub reps: Option<u32>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Axis spec name=v1,v2,...; repeat the flag for more axes.
    #[arg(long = "grid", value_name = "AXIS", required = true)]
    pub grids: Vec<String>,
    /// Template command; {name} expands to the axis value.
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        required = true,
        value_name = "TEMPLATE"
    )]
    pub template: Vec<String>,
}
