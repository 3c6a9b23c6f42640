use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tabattr_cli::config::ExperimentConfig;
use tabattr_cli::{plotdata, runner};

/// Baseline-sensitivity experiments for local feature attributions on
/// tabular data.
#[derive(Parser)]
#[command(name = "tabattr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config file and report errors and warnings.
    Validate { config: PathBuf },
    /// Run the full experiment matrix described by a config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed (overrides the config's master_seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Emit per-dataset and aggregate plot CSVs for a completed run.
    Plotdata { run_dir: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => {
            let config = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            let report = config.validate();
            for warning in &report.warnings {
                println!("warning: {warning}");
            }
            if report.is_ok() {
                println!("config ok");
                ExitCode::SUCCESS
            } else {
                for error in &report.errors {
                    eprintln!("error: {error}");
                }
                ExitCode::from(1)
            }
        }
        Command::Run { config, out, seed } => {
            let config = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            let report = config.validate();
            for warning in &report.warnings {
                println!("warning: {warning}");
            }
            if !report.is_ok() {
                for error in &report.errors {
                    eprintln!("error: {error}");
                }
                return ExitCode::from(1);
            }
            let out_dir = out.unwrap_or_else(|| config.output_dir.clone());
            let master_seed = seed.unwrap_or(config.master_seed);
            match runner::run(&config, &out_dir, master_seed) {
                Ok(summary) => {
                    for line in &summary.report_lines {
                        println!("{line}");
                    }
                    println!(
                        "run complete: {}/{} cells ok, artifacts in {}",
                        summary.cells_total - summary.cells_failed,
                        summary.cells_total,
                        summary.out_dir.display()
                    );
                    if summary.cells_failed == 0 {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Plotdata { run_dir } => match plotdata::emit(&run_dir) {
            Ok(bundle) => {
                for path in &bundle.per_dataset {
                    println!("wrote {}", path.display());
                }
                println!("wrote {}", bundle.aggregate.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
