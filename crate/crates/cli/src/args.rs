use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "mdl-dfa", version, about = "Two-part MDL model selection for DFAs over positive samples")]
pub struct Cli {
    /// Worker threads for the parallel loops (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy state merging from the prefix-tree acceptor.
    Induce(InduceArgs),
    /// Dovetailed search over the standard enumeration for the shortest two-part code.
    Dovetail(EnumArgs),
    /// Dovetailed search keeping the smallest deficiency estimate.
    Direct(EnumArgs),
    /// Structure-function table of a sample.
    Structfn(StructfnArgs),
    /// Rank or unrank a subset in lexicographic order.
    Rank(RankArgs),
    /// Scripted reproductions.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Binary encoding of a DFA file.
    EncodeDfa(EncodeArgs),
    /// DFA file from its binary encoding.
    DecodeDfa(DecodeArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Data file: a line `n d`, then d sorted distinct words.
    #[arg(long)]
    pub data: PathBuf,
    /// Expected word length; rejected if the file disagrees.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Bound on program length in bits.
    #[arg(long)]
    pub alpha: f64,
    /// Trace output path.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Trace format; defaults to jsonl for `.jsonl` paths and csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<TraceFormat>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Plain,
    Safe,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coding {
    Raw,
    Shortest,
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub trace: TraceArgs,
    #[arg(long, value_enum, default_value = "plain")]
    pub rule: Rule,
    /// How program lengths are counted.
    #[arg(long, value_enum, default_value = "raw")]
    pub coding: Coding,
    /// Stop after this many accepted merges.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub trace: TraceArgs,
    /// Largest machine enumerated.
    #[arg(long, default_value_t = 3)]
    pub max_states: usize,
    /// Dovetail stages to run (default: until every program halts).
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassArg {
    Dfa,
    Subsets,
}

#[derive(Debug, Args)]
pub struct StructfnArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "dfa")]
    pub class: ClassArg,
    /// State bound of the dfa class.
    #[arg(long, default_value_t = 3)]
    pub max_states: usize,
    /// Table CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Table JSON output.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Size of the ground set `{0, ..., l-1}`.
    #[arg(long)]
    pub l: u64,
    /// Comma-separated members to rank.
    #[arg(long, value_delimiter = ',', conflicts_with = "unrank", required_unless_present = "unrank")]
    pub members: Option<Vec<u64>>,
    /// Rank to unrank (decimal); requires --d.
    #[arg(long, requires = "d")]
    pub unrank: Option<String>,
    #[arg(long)]
    pub d: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    Oscillation(OscillationArgs),
    Parity(ParityArgs),
    Lemma1(Lemma1Args),
}

#[derive(Debug, Args)]
pub struct ReportOut {
    /// Report JSON output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OscillationArgs {
    #[arg(long, default_value_t = 90)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: ReportOut,
}

#[derive(Debug, Args)]
pub struct ParityArgs {
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: ReportOut,
}

#[derive(Debug, Args)]
pub struct Lemma1Args {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub max_m: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub deltas: Vec<u32>,
    #[command(flatten)]
    pub out: ReportOut,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// DFA text file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Write the bit string here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// File holding the bit string; `#` lines are ignored.
    #[arg(long = "in", conflicts_with = "bits", required_unless_present = "bits")]
    pub input: Option<PathBuf>,
    /// The bit string itself.
    #[arg(long)]
    pub bits: Option<String>,
    /// Write the DFA text here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
