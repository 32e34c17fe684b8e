use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use uavg::config::{Command, Format, RunConfig};
use uavg::{load_config, save_config, CliError};

/// Unitary-averaging formulas, Monte Carlo ensembles, encoder checks, parity
/// codes and fault-tolerance regions.
///
/// Exit codes: 0 success, 2 usage, 3 input data, 4 internal failure.
#[derive(Debug, Parser)]
#[command(name = "uavg", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Replay a saved JSON run configuration instead of a subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the resolved run configuration to this JSON file
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,

    /// Table format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also draw the table as an SVG line chart
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

fn resolve(cli: Cli) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --config or a subcommand, not both".into())),
        (Some(path), None) => load_config(&path)?,
        (None, Some(command)) => RunConfig::new(command),
        (None, None) => return Err(CliError::Usage("a subcommand or --config is required (see --help)".into())),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    if cli.svg.is_some() {
        cfg.svg = cli.svg;
    }
    Ok((cfg, cli.save_config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli).and_then(|(cfg, save)| {
        if let Some(path) = save {
            save_config(&path, &cfg)?;
        }
        uavg::run(&cfg)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("uavg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
