use uavg_core::ft::sweep_region;

use super::{check_grid, powers_of_two, RunOutput};
use crate::config::FtArgs;
use crate::error::Result;
use crate::io::read_curve;
use crate::svg::{Chart, Series};
use crate::table::Table;

pub(super) fn run(args: &FtArgs) -> Result<RunOutput> {
    let curve = read_curve(&args.curve)?;
    check_grid("eps", &args.eps, f64::MIN_POSITIVE, 1.0 - f64::EPSILON)?;
    check_grid("gamma", &args.gamma, 0.0, 1.0 - f64::EPSILON)?;
    let ns = powers_of_two(&args.big_n, None)?;
    let rows = sweep_region(&args.eps, &args.gamma, &ns, &curve)?;

    let mut table = Table::new(["epsilon", "gamma", "N", "effective_error", "effective_loss", "fault_tolerant"]);
    for r in &rows {
        let p = r.point;
        table.push(vec![
            p.epsilon.into(),
            p.gamma.into(),
            p.n.into(),
            p.effective_error.into(),
            p.effective_loss.into(),
            r.fault_tolerant.into(),
        ]);
    }
    table.note("code", curve.name());

    // largest tolerated γ on the grid at each ε, one line per N
    let mut chart = Chart {
        title: format!("fault-tolerant region ({})", curve.name()),
        x_label: "epsilon".into(),
        y_label: "gamma".into(),
        log_x: true,
        log_y: true,
        ..Chart::default()
    };
    chart.series.push(Series { label: format!("{} curve", curve.name()), points: curve.points().to_vec() });
    for &n in &ns {
        let points = args
            .eps
            .iter()
            .filter_map(|&e| {
                rows.iter()
                    .filter(|r| r.point.n == n && r.point.epsilon == e && r.fault_tolerant)
                    .map(|r| r.point.gamma)
                    .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.max(g))))
                    .map(|g| (e, g))
            })
            .collect();
        chart.series.push(Series { label: format!("N={n}"), points });
    }
    Ok(RunOutput { table, chart, report: None })
}
