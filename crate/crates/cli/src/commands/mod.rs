//! One module per subcommand. Each turns its arguments into a [`RunOutput`]
//! without touching the filesystem, except `ft-region` reading its curve.

mod analytic;
mod encode;
mod ft;
mod mc;
mod parity;

pub use analytic::FORMULAS;

use uavg_core::montecarlo::DiscriminationReport;

use crate::config::{BigN, Command, RunConfig};
use crate::error::{CliError, Result};
use crate::svg::Chart;
use crate::table::Table;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub chart: Chart,
    pub report: Option<DiscriminationReport>,
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    match &cfg.command {
        Command::Analytic(a) => analytic::run(a),
        Command::Mc(a) => mc::run(a),
        Command::EncodeCheck(a) => encode::run(a),
        Command::Parity(a) => parity::run(a),
        Command::FtRegion(a) => ft::run(a),
    }
}

fn powers_of_two(ns: &[BigN], max: Option<u64>) -> Result<Vec<u64>> {
    ns.iter()
        .map(|n| match n.power_of_two() {
            Some(k) if max.map_or(true, |m| k <= m) => Ok(k),
            _ => Err(CliError::Usage(match max {
                Some(m) => format!("N = {n} must be a power of two no larger than {m}"),
                None => format!("N = {n} must be a finite power of two"),
            })),
        })
        .collect()
}

fn check_grid(name: &str, values: &[f64], lo: f64, hi: f64) -> Result<()> {
    match values.iter().find(|x| !(**x >= lo && **x <= hi)) {
        Some(x) => Err(CliError::Usage(format!("{name} value {x} is outside [{lo}, {hi}]"))),
        None => Ok(()),
    }
}

fn n_cell(n: BigN) -> crate::table::Cell {
    match n.0 {
        uavg_core::Copies::Finite(k) => k.into(),
        uavg_core::Copies::Infinite => "inf".into(),
    }
}
