use uavg_core::averaging::{encoder_error_scaling, encoder_first_derivatives, loglog_slope};
use uavg_core::gates::named_gate;

use super::{powers_of_two, RunOutput};
use crate::config::EncodeArgs;
use crate::error::{CliError, Result};
use crate::svg::{Chart, Series};
use crate::table::Table;

/// Central-difference step for the first-derivative check.
pub const DERIVATIVE_STEP: f64 = 1e-6;

pub(super) fn run(args: &EncodeArgs) -> Result<RunOutput> {
    let gate = named_gate(&args.gate).map_err(|e| CliError::Usage(e.to_string()))?;
    let ns = powers_of_two(&args.big_n, Some(8))?;
    if let Some(x) = args.dtheta.iter().find(|x| !(x.is_finite() && x.abs() < 1.0)) {
        return Err(CliError::Usage(format!("dtheta value {x} must be finite with |dtheta| < 1")));
    }
    let correlated = !args.uncorrelated;

    let mut table = Table::new(["N", "dtheta", "deviation"]);
    let mut chart = Chart {
        title: "post-selected deviation against encoder error".into(),
        x_label: "dtheta".into(),
        y_label: "||U_out - U_T||_F".into(),
        log_x: true,
        log_y: true,
        ..Chart::default()
    };
    for n in ns {
        let levels = n.trailing_zeros();
        let points = encoder_error_scaling(levels, &gate, &args.dtheta, correlated)?;
        for &(m, dev) in &points {
            table.push(vec![n.into(), m.into(), dev.into()]);
        }
        table.note(format!("slope_N={n}"), loglog_slope(&points));
        let worst = encoder_first_derivatives(levels, &gate, correlated, DERIVATIVE_STEP)?.into_iter().fold(0.0, f64::max);
        table.note(format!("max_first_derivative_N={n}"), worst);
        chart.series.push(Series { label: format!("N={n}"), points });
    }
    Ok(RunOutput { table, chart, report: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BigN;

    fn args(ns: &[&str], dtheta: &[f64]) -> EncodeArgs {
        EncodeArgs {
            big_n: ns.iter().map(|s| s.parse::<BigN>().unwrap()).collect(),
            dtheta: dtheta.to_vec(),
            gate: "H".into(),
            uncorrelated: false,
        }
    }

    #[test]
    fn slope_is_quadratic_for_one_level() {
        let out = run(&args(&["2"], &[1e-3, 1e-4])).unwrap();
        let slope = out.table.notes[0].1.as_f64().unwrap();
        assert!((1.9..=2.1).contains(&slope), "{slope}");
        assert_eq!(out.table.notes[0].0, "slope_N=2");
    }

    #[test]
    fn too_many_copies_is_a_usage_error() {
        assert_eq!(run(&args(&["16"], &[1e-3])).unwrap_err().exit_code(), 2);
    }
}
