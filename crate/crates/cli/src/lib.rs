//! Command-line front end for unitary-averaging experiments.
//!
//! Every run is described by a [`RunConfig`]. Saving it with `--save-config`
//! and replaying it with `--config` reproduces the output byte for byte.
//!
//! Exit codes: 0 success, 2 usage, 3 input data, 4 internal failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;
pub mod svg;
pub mod table;

use std::fs;
use std::path::Path;

pub use commands::{execute, RunOutput};
pub use config::RunConfig;
pub use error::{CliError, Result};

/// Reads a saved configuration; JSON errors are reported with their line.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Unreadable { path: path.to_path_buf(), source })?;
    RunConfig::from_json(&text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

pub fn save_config(path: &Path, cfg: &RunConfig) -> Result<()> {
    let mut text = cfg.to_json();
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

/// Executes `cfg` and writes the table, the optional SVG and the
/// discrimination report.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let out = execute(cfg)?;
    io::emit(cfg.out.as_deref(), &out.table.render(cfg.format))?;
    if let Some(svg) = &cfg.svg {
        fs::write(svg, out.chart.render()).map_err(|source| CliError::Write { path: svg.clone(), source })?;
    }
    if let Some(report) = &out.report {
        let text = report.to_string();
        match &cfg.command {
            config::Command::Mc(config::McArgs { report: Some(path), .. }) => {
                fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source })?
            }
            _ => eprint!("{text}"),
        }
    }
    Ok(())
}
