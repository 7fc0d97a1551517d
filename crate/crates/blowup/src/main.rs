use std::path::PathBuf;
use std::process::ExitCode;

use blowup::config::validate;
use blowup::{load_config, run_experiment, ExperimentConfig, Mode};
use clap::Parser;

/// Certify and simulate finite-time breakdown for relativistic fluids and
/// the radial Euler–Maxwell electron fluid.
#[derive(Debug, Parser)]
#[command(name = "blowup", version)]
struct Cli {
    #[arg(value_enum)]
    mode: Mode,
    /// JSON config file, or `-` for stdin. Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory receiving the report and series files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Reserved; every pipeline is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

fn config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path).map_err(|e| e.to_string())?,
        None => ExperimentConfig::new(cli.mode),
    };
    // The subcommand wins over the file's mode.
    cfg.mode = cli.mode;
    validate(&cfg).map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let _ = cli.seed;
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_experiment(&cfg, &cli.out) {
        Ok(outcome) => {
            if !cli.quiet {
                println!("{}: {}", cfg.mode.name(), outcome.summary);
                for path in &outcome.written {
                    println!("wrote {}", path.display());
                }
            }
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
