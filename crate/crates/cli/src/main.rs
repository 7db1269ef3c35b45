use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "terrainboost", version, about = "Boosting with graph-structured categorical features")]
struct Cli {
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a training config.
    Train(TrainArgs),
    /// Write one probability per input row.
    Predict(PredictArgs),
    /// Log-loss and AUROC of a model on labelled data.
    Evaluate(EvaluateArgs),
    /// List every allowable split of a graph.
    EnumerateSplits(EnumerateArgs),
    /// Draw candidate splits with a sampler.
    SampleSplits(SampleArgs),
    /// Generate a synthetic scenario dataset.
    Synth(SynthArgs),
    /// Run the benchmark protocol and write a report.
    Benchmark(BenchmarkArgs),
    /// Summary statistics for a graph file.
    GraphInfo(GraphInfoArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// Training config (JSON); relative paths resolve against its directory.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for model.json and history.csv.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    SpanningTree,
    EdgeContraction,
    FullEnumeration,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Sampler config (JSON); the method flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    contraction_size: Option<usize>,
    #[arg(long)]
    max_splits: Option<usize>,
    #[arg(long)]
    num_trees: Option<usize>,
    /// Number of sampler draws; the output is their union.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    GridWeather,
    HoldoutVertices,
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario spec (JSON). Without it the named scenario's defaults apply.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Benchmark config (JSON). Without it the defaults apply.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the report files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GraphInfoArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Also count connected sets up to this size.
    #[arg(long)]
    max_set_size: Option<usize>,
    /// Cap on sets visited while counting.
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    match cli.command {
        Command::Train(a) => commands::train(a),
        Command::Predict(a) => commands::predict(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::EnumerateSplits(a) => commands::enumerate_splits(a),
        Command::SampleSplits(a) => commands::sample_splits(a),
        Command::Synth(a) => commands::synth(a),
        Command::Benchmark(a) => commands::benchmark(a),
        Command::GraphInfo(a) => commands::graph_info(a),
    }
}
