//! `tsgn`: synthesize, inspect, map, featurize and evaluate ego-network
//! datasets.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::LevelFilter;
use tsgn_core::features::Source;
use tsgn_core::ingest::SizeProfile;
use tsgn_core::{AttributeTier, EgoForm, Variant};

#[derive(Debug, Parser)]
#[command(
    name = "tsgn",
    version,
    about = "Transaction subgraph networks for ego-network classification"
)]
struct Cli {
    /// Worker threads (0 = one per core). Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Repeat for more log output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a labeled synthetic dataset directory.
    Synth(SynthArgs),
    /// Print the dataset summary table.
    Stats(StatsArgs),
    /// Write the mapped graphs of each requested variant.
    Transform(TransformArgs),
    /// Export handcrafted feature matrices as CSV.
    Features(FeaturesArgs),
    /// Score TN and each TN + variant fusion with a random forest.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Ego-network form to extract.
    #[arg(long, default_value = "net")]
    form: EgoForm,
    /// Attribute tier to keep.
    #[arg(long, default_value = "multiedge")]
    tier: AttributeTier,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value = "etherg1")]
    profile: SizeProfile,
    #[arg(long, default_value_t = 350)]
    n_per_class: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Row name; defaults to the directory name.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    shape: ShapeArgs,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// tsgn, dtsgn, ttsgn or mtsgn; repeatable.
    #[arg(long = "variant")]
    variants: Vec<Variant>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FeaturesArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// tn, tsgn, dtsgn, ttsgn or mtsgn; repeatable. Defaults to tn.
    #[arg(long = "variant")]
    sources: Vec<Source>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Dataset directory; mutually exclusive with --profile.
    #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
    dataset: Option<PathBuf>,
    /// Evaluate on a freshly generated synthetic dataset instead.
    #[arg(long)]
    profile: Option<SizeProfile>,
    #[arg(long, default_value_t = 350, requires = "profile")]
    n_per_class: usize,
    /// Mapped variants to fuse with TN; repeatable. `tn` is implied.
    #[arg(long = "variant")]
    sources: Vec<Source>,
    #[arg(long, default_value_t = 300)]
    repeats: usize,
    /// Master seed for generation, splits and forests.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trees: usize,
    #[arg(long, default_value_t = 0.9)]
    train_fraction: f64,
    /// Dataset name in the report.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Stats(a) => commands::stats(a),
        Command::Transform(a) => commands::transform(a),
        Command::Features(a) => commands::features(a),
        Command::Evaluate(a) => commands::evaluate(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
