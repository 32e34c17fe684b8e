use uavg_core::parity::{
    enumerated_success_prob, herald_prob_from_ua, logical_success_prob, LossModel, ParityCode, MAX_ENUMERATED_QUBITS,
};

use super::{check_grid, n_cell, RunOutput};
use crate::config::ParityArgs;
use crate::error::{CliError, Result};
use crate::svg::{Chart, Series};
use crate::table::{Cell, Table};

pub(super) fn run(args: &ParityArgs) -> Result<RunOutput> {
    check_grid("p", &args.p, 0.0, 1.0)?;
    check_grid("nu", &args.nu, 0.0, f64::MAX)?;
    // (ν, N, p): explicit p first, then one p per averaged-gate point
    let mut sources: Vec<(Cell, Cell, f64)> = args.p.iter().map(|&p| (Cell::Empty, Cell::Empty, p)).collect();
    for &nu in &args.nu {
        for &n in &args.big_n {
            let p = herald_prob_from_ua(nu, n.0, args.depth).map_err(|e| CliError::Usage(format!("nu = {nu}, N = {n}: {e}")))?;
            sources.push((nu.into(), n_cell(n), p));
        }
    }

    let mut table = Table::new(["n", "q", "nu", "N", "p", "success", "enumerated"]);
    let mut chart = Chart {
        title: "parity-code logical success".into(),
        x_label: "p".into(),
        y_label: "success probability".into(),
        ..Chart::default()
    };
    for &n in &args.n {
        for &q in &args.q {
            let code = ParityCode::new(n, q)?;
            let mut series = Series { label: format!("n={n}, q={q}"), points: Vec::new() };
            for (nu, big_n, p) in &sources {
                let loss = LossModel::new(*p)?;
                let success = logical_success_prob(&code, &loss);
                let enumerated = if n * q <= MAX_ENUMERATED_QUBITS { Some(enumerated_success_prob(&code, &loss)?) } else { None };
                table.push(vec![n.into(), q.into(), nu.clone(), big_n.clone(), (*p).into(), success.into(), enumerated.into()]);
                series.points.push((*p, success));
            }
            chart.series.push(series);
        }
    }
    Ok(RunOutput { table, chart, report: None })
}
