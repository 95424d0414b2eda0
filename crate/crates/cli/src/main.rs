mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rankcomp::prediction::DesignMode;
use rankcomp::{Ingestion, Level};

#[derive(Parser)]
#[command(name = "rankcomp", version, about = "Rank-based complementarity analysis of evaluation metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a score table is complete and print its shape.
    Validate(InputArgs),
    /// Pairwise complementarity matrix, group summary and heatmap.
    Complementarity {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// PCA of the Borda representations and Louvain clusters.
    Structure {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        opts: StructureOpts,
    },
    /// Cross-validated prediction of human metrics from other metrics.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        opts: PredictOpts,
    },
    /// Compare Borda consensus with the exact Kemeny consensus on random families.
    KemenyAudit {
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        opts: AuditOpts,
    },
    /// Write a seeded synthetic score table and its profile document.
    Synth {
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        opts: SynthOpts,
    },
}

#[derive(Args, Clone)]
pub struct InputArgs {
    /// Long-format score table (dataset,metric,system,utterance,score).
    #[arg(long)]
    pub input: PathBuf,
    /// Metric profile document (TOML).
    #[arg(long)]
    pub profiles: PathBuf,
    /// Dataset to use when the table holds several.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Reject tables with missing cells (default).
    #[arg(long, conflicts_with = "drop_incomplete")]
    pub strict: bool,
    /// Drop every utterance that is missing a cell.
    #[arg(long)]
    pub drop_incomplete: bool,
}

impl InputArgs {
    pub fn ingestion(&self) -> Ingestion {
        if self.drop_incomplete {
            Ingestion::DropIncomplete
        } else {
            Ingestion::Strict
        }
    }
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelArg {
    System,
    Utterance,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::System => Level::System,
            LevelArg::Utterance => Level::Utterance,
        }
    }
}

#[derive(Args, Clone, Serialize)]
pub struct StructureOpts {
    #[arg(long, value_enum, default_value_t = LevelArg::System)]
    pub level: LevelArg,
    /// Cumulative explained variance defining the effective dimension.
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
    /// Scale columns to unit variance before PCA.
    #[arg(long)]
    pub standardize: bool,
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressorArg {
    Lasso,
    Gbt,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignArg {
    Raw,
    System,
    Utterance,
}

impl From<DesignArg> for DesignMode {
    fn from(d: DesignArg) -> Self {
        match d {
            DesignArg::Raw => DesignMode::RawScores,
            DesignArg::System => DesignMode::SystemRanks,
            DesignArg::Utterance => DesignMode::UtteranceRanks,
        }
    }
}

#[derive(Args, Clone, Serialize)]
pub struct PredictOpts {
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, value_enum, default_value_t = RegressorArg::Gbt)]
    pub regressor: RegressorArg,
    /// Boosting rounds used when `--regressor gbt`.
    #[arg(long, default_value_t = 200)]
    pub rounds: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Lasso penalty used when `--regressor lasso`.
    #[arg(long, default_value_t = 1e-4)]
    pub lasso_alpha: f64,
    /// Descending, comma-separated lasso penalties for the path and MSE ratio.
    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.2,0.1,0.05,0.02,0.01,0.005,0.002,0.001,0")]
    pub alphas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = DesignArg::Raw)]
    pub design: DesignArg,
    /// Restrict to one human target (default: every human metric).
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Args, Clone, Serialize)]
pub struct AuditOpts {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub max_voters: usize,
    #[arg(long, default_value_t = 6)]
    pub max_items: usize,
}

#[derive(Args, Clone, Serialize)]
pub struct SynthOpts {
    #[arg(long, default_value_t = 5)]
    pub humans: usize,
    #[arg(long, default_value_t = 8)]
    pub automatics: usize,
    #[arg(long, default_value_t = 10)]
    pub systems: usize,
    #[arg(long, default_value_t = 100)]
    pub utterances: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(input) => commands::validate(&input),
        Command::Complementarity { input, out } => commands::complementarity(&input, &out),
        Command::Structure { input, out, opts } => commands::structure(&input, &out, &opts),
        Command::Predict { input, out, opts } => commands::predict(&input, &out, &opts),
        Command::KemenyAudit { out, opts } => commands::kemeny_audit(&out, &opts),
        Command::Synth { out, opts } => commands::synth(&out, &opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
