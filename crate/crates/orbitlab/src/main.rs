//! Experiment runner CLI.
//!
//! Usage: `orbitlab <kind> --config <path> [--out <dir>] [--svg]`
//! Kinds: orbit, alpha, recursion, cocycle, ratio, density, roth.
//! Exit codes: 0 success, 2 config parse, 3 validation, 4 budget.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use orbitlab::runner::{parse_config, run_experiment, ExperimentKind, RunError};

#[derive(Parser)]
#[command(
    name = "orbitlab",
    about = "Exact-arithmetic experiments on orbits of rational self-maps over Q"
)]
struct Cli {
    /// Experiment kind: orbit, alpha, recursion, cocycle, ratio, density, roth
    kind: String,

    /// Path to the JSON experiment config
    #[arg(long)]
    config: PathBuf,

    /// Output directory (overrides the config's out_dir; default "out")
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also emit SVG line charts
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("orbitlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, RunError> {
    let kind: ExperimentKind = cli
        .kind
        .parse()
        .map_err(RunError::Validation)?;
    let text = std::fs::read_to_string(&cli.config).map_err(|e| {
        RunError::ConfigParse(format!("cannot read {}: {e}", cli.config.display()))
    })?;
    let config = parse_config(&text)?;
    let out_dir = cli
        .out
        .clone()
        .or_else(|| config.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let output = run_experiment(kind, &config, &out_dir, cli.svg)?;
    Ok(output.files)
}
