use uavg_core::analytic::{
    fidelity_4mode, fidelity_first_order, fidelity_single, fidelity_type2, ps_4mode, ps_first_order, ps_gaussian_exact,
    ps_single, ps_type2, FourModeVariant, Type2Variant,
};
use uavg_core::{Copies, FidelityForm, FormulaVariant};

use super::RunOutput;
use crate::config::AnalyticArgs;
use crate::error::{CliError, Result};
use crate::svg::{Chart, Series};
use crate::table::Table;

/// Formula ids accepted by `analytic --formula`.
pub const FORMULAS: [&str; 9] = [
    "ps-single",
    "fidelity-single",
    "ps-4mode",
    "fidelity-4mode",
    "ps-type2",
    "fidelity-type2",
    "ps-first-order",
    "fidelity-first-order",
    "ps-gaussian-exact",
];

type Eval = Box<dyn Fn(f64, Copies) -> uavg_core::Result<f64>>;

fn variants(formula: &str, depth: u32) -> Result<Vec<(String, Eval)>> {
    let v: Vec<(String, Eval)> = match formula {
        "ps-single" => FormulaVariant::ALL
            .iter()
            .map(|&v| (v.name().to_string(), Box::new(move |nu, n| ps_single(nu, n, v)) as Eval))
            .collect(),
        "fidelity-single" => FidelityForm::ALL
            .iter()
            .map(|&f| (f.name().to_string(), Box::new(move |nu, n| fidelity_single(nu, n, f)) as Eval))
            .collect(),
        "ps-4mode" => FourModeVariant::ALL
            .iter()
            .map(|&v| (v.name().to_string(), Box::new(move |nu, n| ps_4mode(nu, n, v)) as Eval))
            .collect(),
        "fidelity-4mode" => vec![("printed".into(), Box::new(fidelity_4mode) as Eval)],
        "ps-type2" => {
            Type2Variant::ALL.iter().map(|&v| (v.name().to_string(), Box::new(move |nu, n| ps_type2(nu, n, v)) as Eval)).collect()
        }
        "fidelity-type2" => Type2Variant::ALL
            .iter()
            .map(|&v| (v.name().to_string(), Box::new(move |nu, n| fidelity_type2(nu, n, v)) as Eval))
            .collect(),
        "ps-first-order" => vec![("first-order".into(), Box::new(ps_first_order) as Eval)],
        "fidelity-first-order" => vec![("first-order".into(), Box::new(fidelity_first_order) as Eval)],
        "ps-gaussian-exact" => {
            vec![(format!("gaussian-exact-d{depth}"), Box::new(move |nu, n| ps_gaussian_exact(depth, nu, n)) as Eval)]
        }
        other => {
            return Err(CliError::Usage(format!("unknown formula `{other}`; expected one of {}", FORMULAS.join(", "))));
        }
    };
    Ok(v)
}

pub(super) fn run(args: &AnalyticArgs) -> Result<RunOutput> {
    let mut forms = variants(&args.formula, args.depth)?;
    if let Some(wanted) = &args.variant {
        forms.retain(|(name, _)| name == wanted);
        if forms.is_empty() {
            let names: Vec<String> = variants(&args.formula, args.depth)?.into_iter().map(|(n, _)| n).collect();
            return Err(CliError::Usage(format!(
                "`{}` has no variant `{wanted}`; expected one of {}",
                args.formula,
                names.join(", ")
            )));
        }
    }

    let mut table = Table::new(["nu", "N", "value", "variant"]);
    let mut chart = Chart {
        title: args.formula.clone(),
        x_label: if args.formula.ends_with("first-order") { "V".into() } else { "nu".into() },
        y_label: if args.formula.starts_with("ps") { "P_s".into() } else { "fidelity".into() },
        ..Chart::default()
    };
    for (name, eval) in &forms {
        for n in &args.big_n {
            let mut series = Series { label: format!("{name}, N={n}"), points: Vec::new() };
            for &nu in &args.nu {
                let value = eval(nu, n.0)?;
                table.push(vec![nu.into(), super::n_cell(*n), value.into(), name.as_str().into()]);
                series.points.push((nu, value));
            }
            chart.series.push(series);
        }
    }
    Ok(RunOutput { table, chart, report: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BigN;
    use crate::table::Cell;

    fn args(formula: &str, nu: &[f64], ns: &[&str]) -> AnalyticArgs {
        AnalyticArgs {
            formula: formula.into(),
            variant: None,
            nu: nu.to_vec(),
            big_n: ns.iter().map(|s| s.parse::<BigN>().unwrap()).collect(),
            depth: 3,
        }
    }

    #[test]
    fn limit_is_one_minus_three_nu() {
        let mut a = args("ps-single", &[0.0, 0.01], &["1", "inf"]);
        a.variant = Some("main-text".into());
        let out = run(&a).unwrap();
        assert_eq!(out.table.rows.len(), 4);
        let last = &out.table.rows[3];
        assert_eq!(last[1], Cell::Text("inf".into()));
        assert_eq!(out.table.rows[0][1], Cell::Int(1));
        let limit = last[2].as_f64().unwrap();
        assert!((limit - (0.97 + 4.5e-4)).abs() < 1e-15);
        assert!((limit - 0.97).abs() <= 10.0 * 1e-4);
        assert_eq!(out.table.rows[0][2], Cell::Float(1.0));
    }

    #[test]
    fn every_formula_has_a_variant() {
        for f in FORMULAS {
            let out = run(&args(f, &[0.001], &["2"])).unwrap();
            assert!(!out.table.rows.is_empty(), "{f}");
        }
    }

    #[test]
    fn unknown_ids_are_usage_errors() {
        assert_eq!(run(&args("ps-nope", &[0.01], &["1"])).unwrap_err().exit_code(), 2);
        let mut a = args("ps-single", &[0.01], &["1"]);
        a.variant = Some("nope".into());
        assert_eq!(run(&a).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn empty_grid_gives_empty_table() {
        let out = run(&args("ps-single", &[], &["1", "2"])).unwrap();
        assert!(out.table.rows.is_empty());
        assert_eq!(out.table.columns, ["nu", "N", "value", "variant"]);
    }
}
