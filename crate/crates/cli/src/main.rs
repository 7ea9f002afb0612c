use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use desc_cli::artifacts::write_file;
use desc_cli::commands::{cmd_evaluate, cmd_extract_features, cmd_predict, cmd_profile, cmd_train};
use desc_cli::config::RunConfig;
use desc_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "desc", version, about = "Figurative-language classification with a soft-voting ensemble")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model directory to write (train) or read (evaluate, predict).
    #[arg(long)]
    model_dir: Option<PathBuf>,
    /// Tab-separated dataset `id<TAB>label<TAB>text`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory; results go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Train the three members and the ensemble weights.
    Train(Common),
    /// Score a trained model directory on a labeled file.
    Evaluate(Common),
    /// Predict classes and combined confidences for each row.
    Predict(Common),
    /// Write the 44 engineered features of each row as CSV.
    ExtractFeatures(Common),
    /// Per-class means of the engineered features.
    Profile(Common),
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| CliError::InvalidConfig(format!("--{flag} is required")))
}

fn emit(out: Option<&Path>, file: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => write_file(&dir.join(file), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(a) => {
            let config = RunConfig::load(need(&a.config, "config")?)?;
            let dir = a
                .model_dir
                .clone()
                .or_else(|| config.output_dir.clone())
                .ok_or_else(|| CliError::InvalidConfig("--model-dir or output_dir is required".into()))?;
            let summary = cmd_train(&config, need(&a.input, "input")?, &dir, a.seed)?;
            print!("{}", summary.weights_report);
            eprintln!("model written to {}", summary.model_dir.display());
        }
        Command::Evaluate(a) => {
            let report = cmd_evaluate(need(&a.model_dir, "model-dir")?, need(&a.input, "input")?, a.out.as_deref())?;
            print!("{}", report.text);
            eprintln!("reports written to {}", report.out_dir.display());
        }
        Command::Predict(a) => {
            let text = cmd_predict(need(&a.model_dir, "model-dir")?, need(&a.input, "input")?)?;
            emit(a.out.as_deref(), "predictions.tsv", &text)?;
        }
        Command::ExtractFeatures(a) => {
            let config = RunConfig::load(need(&a.config, "config")?)?;
            let text = cmd_extract_features(&config, need(&a.input, "input")?)?;
            emit(a.out.as_deref(), "features.csv", &text)?;
        }
        Command::Profile(a) => {
            let config = RunConfig::load(need(&a.config, "config")?)?;
            let text = cmd_profile(&config, need(&a.input, "input")?)?;
            emit(a.out.as_deref(), "profile.csv", &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
