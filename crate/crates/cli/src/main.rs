use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use zeropi_cli::{plot, run, RunConfig, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Spectrum,
    Sweep,
    Dispersive,
    Coherence,
    Purcell,
    Validate,
    /// Write gnuplot scripts for the CSV outputs.
    Plot,
}

/// Spectra, dispersive shifts and coherence budgets of the 0-pi qubit.
#[derive(Debug, Parser)]
#[command(name = "zeropi", version)]
struct Cli {
    task: Command,
    /// TOML run configuration.
    #[arg(long, required_if_eq_any = [
        ("task", "spectrum"), ("task", "sweep"), ("task", "dispersive"),
        ("task", "coherence"), ("task", "purcell"), ("task", "validate"),
    ])]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let task = match cli.task {
        Command::Spectrum => Task::Spectrum,
        Command::Sweep => Task::Sweep,
        Command::Dispersive => Task::Dispersive,
        Command::Coherence => Task::Coherence,
        Command::Purcell => Task::Purcell,
        Command::Validate => Task::Validate,
        Command::Plot => {
            let dir = cli.out.unwrap_or_else(|| PathBuf::from("."));
            return match plot::write_scripts(&dir) {
                Ok(names) => {
                    for n in names {
                        println!("{}", dir.join(n).display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("zeropi: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    let config = cli.config.expect("clap enforces --config");
    let result = RunConfig::load(&config).and_then(|cfg| run(task, &cfg, cli.out.as_deref(), cli.workers));
    match result {
        Ok(outcome) => {
            for l in &outcome.lines {
                println!("{l}");
            }
            if !outcome.warnings.is_empty() {
                eprintln!("zeropi: {} warning(s) recorded in manifest.json", outcome.warnings.len());
            }
            eprintln!("zeropi: wrote {} file(s) to {}", outcome.files.len(), outcome.out_dir.display());
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("zeropi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
