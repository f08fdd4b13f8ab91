//! `hopjam` command-line driver.

mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopjam::config::Preset;
use hopjam::Error;

/// Frequency-hopping interference synthesis, time-frequency imaging and
/// Siamese classification.
#[derive(Debug, Parser)]
#[command(name = "hopjam", version)]
pub struct Cli {
    /// Master seed for every randomized stage.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON run configuration; fields it omits come from the preset.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads (HOPJAM_THREADS takes precedence).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Base configuration.
    #[arg(long, global = true, value_enum, default_value_t = PresetArg::Paper)]
    pub preset: PresetArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Paper,
    Desk,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Paper => Preset::Paper,
            PresetArg::Desk => Preset::Desk,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a received signal from a scenario JSON file.
    Synth(SynthArgs),
    /// Render spectrograms, gray images and the composite of a signal file.
    Tfa(TfaArgs),
    /// Generate a labelled corpus of composite images.
    Dataset(DatasetArgs),
    /// Train the Siamese network on a corpus's training split.
    Train(TrainArgs),
    /// Evaluate a checkpoint on a corpus's test split.
    Eval(EvalArgs),
    /// Render figure data and images from earlier outputs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scenario JSON.
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Output file stem inside the output directory.
    #[arg(long, default_value = "signal")]
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Wavelet,
    Mhd,
    Bjd,
    All,
}

#[derive(Debug, Args)]
pub struct TfaArgs {
    /// Signal file written by `synth`.
    #[arg(long, value_name = "FILE")]
    pub signal: PathBuf,
    #[arg(long, value_enum, default_value_t = TransformArg::All)]
    pub transform: TransformArg,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Corpus directory name inside the output directory.
    #[arg(long, default_value = "corpus")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Corpus directory (default: <out>/corpus).
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    /// Training iterations.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Matching pairs per iteration.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Data-parallel gradient evaluation (not bit-exact across thread counts).
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Corpus directory (default: <out>/corpus).
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    /// Checkpoint (default: <out>/model.ckpt).
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Corpus directory (default: <out>/corpus).
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
}

/// Exit status for a library error: 2 for bad configuration or input
/// files, 3 for missing inputs, 4 for numerical failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(mut e) = err.downcast_ref::<Error>() else { return 1 };
    while let Error::Pipeline { source, .. } = e {
        e = source;
    }
    match e {
        Error::Missing(_) => 3,
        Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => 3,
        Error::Numerical { .. } | Error::Divergence { .. } | Error::Degenerate(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
