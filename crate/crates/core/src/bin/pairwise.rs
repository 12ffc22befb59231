use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};

use pairwise::commands::{self, Experiment, OutputFormat, SimulateOptions};
use pairwise::service::Service;
use pairwise::store::FileStore;
use pairwise::weights::WeightMethod;
use pairwise::ComparisonScale;

#[derive(Parser)]
#[command(name = "pairwise", version, about = "Pairwise-comparison weights, transitivity audits and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weights and consistency of a complete judgment matrix.
    Weights {
        matrix: PathBuf,
        #[arg(long, default_value = "approx")]
        method: WeightMethod,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Lists every triad that breaks ordinal transitivity.
    Audit { matrix: PathBuf },
    /// Binary-comparison baselines.
    Baseline {
        #[command(subcommand)]
        kind: Baseline,
    },
    /// Mean weights and confidence intervals over a study's completed sessions.
    Aggregate {
        study_dir: PathBuf,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, default_value = "approx")]
        method: WeightMethod,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Simulated-expert experiments.
    Simulate {
        /// fig1, sensitivity or control
        experiment: Experiment,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Repeatable, e.g. `--scale saaty9 --scale three:3,9`.
        #[arg(long = "scale")]
        scales: Vec<ComparisonScale>,
        /// Print the headline comparison to stderr.
        #[arg(long)]
        summary: bool,
        /// Draw truths without replacement.
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        trials: Option<usize>,
        /// Object count (n for fig1, h otherwise).
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        experts: Option<usize>,
        #[arg(long)]
        slip: Option<f64>,
    },
    /// Serves the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "PAIRWISE_DATA_DIR", default_value = "pairwise-data")]
        data_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum Baseline {
    /// Win counts of one binary matrix.
    CFreq { matrix: PathBuf },
    /// Thurstone scale values pooled over several experts.
    Thurstone {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        no_clamp: bool,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Weights { matrix, method, format } => print!("{}", commands::weights(&matrix, method, format)?),
        Command::Audit { matrix } => {
            let (text, n) = commands::audit(&matrix)?;
            print!("{text}");
            eprintln!("{n} conflicting triad(s)");
        }
        Command::Baseline { kind: Baseline::CFreq { matrix } } => print!("{}", commands::baseline_c_freq(&matrix)?),
        Command::Baseline { kind: Baseline::Thurstone { matrices, no_clamp } } => {
            print!("{}", commands::baseline_thurstone(&matrices, !no_clamp)?)
        }
        Command::Aggregate { study_dir, level, method, format } => {
            print!("{}", commands::aggregate_study(&study_dir, level, method, format)?)
        }
        Command::Simulate { experiment, seed, out, scales, summary, distinct, trials, h, experts, slip } => {
            let opts = SimulateOptions { seed, scales, distinct, trials, h, experts, slip_prob: slip };
            let (csv, text) = commands::simulate(experiment, &opts)?;
            match out {
                Some(path) => std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            if summary {
                eprint!("{text}");
            }
        }
        Command::Serve { port, data_dir } => {
            let service = Arc::new(Service::open(FileStore::new(&data_dir))?);
            let addr = SocketAddr::from(([0, 0, 0, 0], port));
            eprintln!("serving on http://{addr} with data under {}", data_dir.display());
            tokio::runtime::Runtime::new()?.block_on(pairwise::http::serve(service, addr))?;
        }
    }
    Ok(())
}
