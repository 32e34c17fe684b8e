use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use uavg_core::analytic::{
    fidelity_4mode, fidelity_single, fidelity_type2, ps_4mode, ps_first_order, ps_single, ps_type2, FourModeVariant, Type2Variant,
};
use uavg_core::gates::{named_gate, Parameterized};
use uavg_core::montecarlo::discrimination::{four_mode_candidates, point_seed, single_qubit_candidates, type2_candidates};
use uavg_core::montecarlo::{variant_discrimination, AveragedKernel, Candidate, GridPoint, McConfig};
use uavg_core::{c64, Copies, FidelityForm, FormulaVariant, FourModeParams, FusionParams, NoiseKind, NoiseSpec, PhotonicState};

use super::{check_grid, powers_of_two, RunOutput};
use crate::config::{Family, McArgs, NoiseArg, QubitInput};
use crate::error::{CliError, Result};
use crate::parallel::run_parallel;
use crate::svg::{Chart, Series};
use crate::table::{Cell, Table};

type Formula = Box<dyn Fn(f64, Copies) -> uavg_core::Result<f64>>;

const FIXED_COLUMNS: [&str; 15] = [
    "nu",
    "N",
    "seed",
    "samples",
    "ps",
    "ps_stderr",
    "first_order",
    "fidelity_ratio_of_means",
    "fidelity_ratio_of_means_stderr",
    "fidelity_mean_of_ratios",
    "fidelity_mean_of_ratios_stderr",
    "fidelity_coherent",
    "fidelity_coherent_stderr",
    "excluded",
    "noise",
];

struct FamilySetup {
    name: &'static str,
    input: PhotonicState,
    formulas: Vec<(String, Formula)>,
    candidates: Vec<Candidate>,
}

fn noise_spec(kind: NoiseArg, nu: f64) -> uavg_core::Result<NoiseSpec> {
    match kind {
        NoiseArg::Gaussian => NoiseSpec::gaussian(nu),
        NoiseArg::Uniform => NoiseSpec::new(nu, NoiseKind::UniformMatched),
        NoiseArg::TwoPoint => NoiseSpec::kurtosis_one(nu),
    }
}

fn noise_name(kind: NoiseArg) -> &'static str {
    match kind {
        NoiseArg::Gaussian => "gaussian",
        NoiseArg::Uniform => "uniform",
        NoiseArg::TwoPoint => "two-point",
    }
}

fn qubit_input(input: QubitInput) -> uavg_core::Result<PhotonicState> {
    let h = FRAC_1_SQRT_2;
    let amps = match input {
        QubitInput::H => [c64(1.0, 0.0), c64(0.0, 0.0)],
        QubitInput::V => [c64(0.0, 0.0), c64(1.0, 0.0)],
        QubitInput::D => [c64(h, 0.0), c64(h, 0.0)],
        QubitInput::R => [c64(h, 0.0), c64(0.0, h)],
    };
    PhotonicState::single_photon(&amps)
}

fn fusion_input(photons: u8) -> Result<PhotonicState> {
    match photons {
        1 => Ok(PhotonicState::basis(4, &[0])?),
        2 => Ok(PhotonicState::basis(4, &[0, 2])?),
        p => Err(CliError::Usage(format!("a fusion network takes 1 or 2 photons, not {p}"))),
    }
}

fn setup(args: &McArgs) -> Result<FamilySetup> {
    let s = match args.family {
        Family::Single => {
            if args.photons != 1 {
                return Err(CliError::Usage("the single-qubit family carries exactly one photon".into()));
            }
            let mut formulas: Vec<(String, Formula)> = FormulaVariant::ALL
                .iter()
                .map(|&v| (format!("ps:{}", v.name()), Box::new(move |nu, n| ps_single(nu, n, v)) as Formula))
                .collect();
            formulas.extend(
                FidelityForm::ALL
                    .iter()
                    .map(|&f| (format!("fidelity:{}", f.name()), Box::new(move |nu, n| fidelity_single(nu, n, f)) as Formula)),
            );
            FamilySetup { name: "single-qubit", input: qubit_input(args.input)?, formulas, candidates: single_qubit_candidates() }
        }
        Family::FourMode => {
            let mut formulas: Vec<(String, Formula)> = FourModeVariant::ALL
                .iter()
                .map(|&v| (format!("ps:{}", v.name()), Box::new(move |nu, n| ps_4mode(nu, n, v)) as Formula))
                .collect();
            formulas.push(("fidelity:printed".into(), Box::new(fidelity_4mode)));
            FamilySetup { name: "four-mode", input: fusion_input(args.photons)?, formulas, candidates: four_mode_candidates() }
        }
        Family::Type2 => {
            let mut formulas: Vec<(String, Formula)> = Type2Variant::ALL
                .iter()
                .map(|&v| (format!("ps:{}", v.name()), Box::new(move |nu, n| ps_type2(nu, n, v)) as Formula))
                .collect();
            formulas.extend(
                Type2Variant::ALL
                    .iter()
                    .map(|&v| (format!("fidelity:{}", v.name()), Box::new(move |nu, n| fidelity_type2(nu, n, v)) as Formula)),
            );
            FamilySetup { name: "type-ii-fusion", input: fusion_input(args.photons)?, formulas, candidates: type2_candidates() }
        }
    };
    Ok(s)
}

fn default_noise(family: Family) -> NoiseArg {
    match family {
        Family::Type2 => NoiseArg::TwoPoint,
        Family::Single | Family::FourMode => NoiseArg::Gaussian,
    }
}

pub(super) fn run(args: &McArgs) -> Result<RunOutput> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let ns = powers_of_two(&args.big_n, None)?;
    check_grid("nu", &args.nu, 0.0, f64::MAX)?;
    match args.family {
        Family::Single => {
            let gate = named_gate(&args.gate).map_err(|e| CliError::Usage(e.to_string()))?;
            run_family(args, &ns, gate)
        }
        Family::FourMode => run_family(args, &ns, FourModeParams::default()),
        Family::Type2 => run_family(args, &ns, FusionParams::IDEAL),
    }
}

fn run_family<P: Parameterized + Sync>(args: &McArgs, ns: &[u64], target: P) -> Result<RunOutput> {
    let fam = setup(args)?;
    let noise = args.noise.unwrap_or_else(|| default_noise(args.family));
    let depth = P::PATH_DEPTH;
    let photons = f64::from(args.photons);

    let mut table = Table::new(FIXED_COLUMNS.iter().map(|s| s.to_string()).chain(fam.formulas.iter().map(|(n, _)| n.clone())));
    let mut chart = Chart {
        title: format!("{} success probability ({} noise)", fam.name, noise_name(noise)),
        x_label: "N".into(),
        y_label: "P_s".into(),
        log_x: true,
        ..Chart::default()
    };
    let mut grid = Vec::new();
    let mut k = 0usize;
    for &nu in &args.nu {
        let spec = noise_spec(noise, nu)?;
        let mut series = Series { label: format!("nu={nu}"), points: Vec::new() };
        for &n in ns {
            let seed = point_seed(args.seed, k);
            k += 1;
            let kernel = AveragedKernel::new(target.clone(), spec, n as usize, &fam.input)?;
            let cfg = McConfig::new(args.samples, seed, fam.input.clone());
            let s = run_parallel(&kernel, &cfg)?;
            let copies = Copies::Finite(n);
            let first = ps_first_order(photons * f64::from(depth) * nu, copies).ok();
            let mut row: Vec<Cell> = vec![
                nu.into(),
                n.into(),
                seed.into(),
                args.samples.into(),
                s.ps.mean.into(),
                s.ps.stderr.into(),
                first.into(),
                s.fidelity_ratio_of_means.mean.into(),
                s.fidelity_ratio_of_means.stderr.into(),
                s.fidelity_mean_of_ratios.mean.into(),
                s.fidelity_mean_of_ratios.stderr.into(),
                s.fidelity_coherent.mean.into(),
                s.fidelity_coherent.stderr.into(),
                s.excluded.into(),
                noise_name(noise).into(),
            ];
            row.extend(fam.formulas.iter().map(|(_, f)| Cell::from(f(nu, copies).ok())));
            table.push(row);
            series.points.push((n as f64, s.ps.mean));
            if nu > 0.0 {
                grid.push(GridPoint { nu, n, mean: s.ps.mean, stderr: s.ps.stderr });
            }
        }
        chart.series.push(series);
    }

    let distinct_n: BTreeSet<u64> = grid.iter().map(|p| p.n).collect();
    let report = if args.photons == 1 && grid.len() >= 3 && distinct_n.len() >= 3 {
        let mut r = variant_discrimination(fam.name, depth, &grid, &fam.candidates)?;
        r.total_samples = args.samples * k as u64;
        table.note("selected_variant", r.selected.clone());
        table.note("delta_chi2", r.delta_chi2);
        Some(r)
    } else {
        None
    };
    Ok(RunOutput { table, chart, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BigN;

    fn args(family: Family, nu: &[f64], ns: &[u64], samples: u64) -> McArgs {
        McArgs {
            family,
            gate: "H".into(),
            input: QubitInput::H,
            photons: 1,
            noise: None,
            nu: nu.to_vec(),
            big_n: ns.iter().map(|&n| BigN(Copies::Finite(n))).collect(),
            samples,
            seed: 5,
            report: None,
        }
    }

    #[test]
    fn zero_noise_column_is_one() {
        for family in [Family::Single, Family::FourMode, Family::Type2] {
            let out = run(&args(family, &[0.0], &[1, 2, 4], 100)).unwrap();
            let col = out.table.column("ps").unwrap();
            for row in &out.table.rows {
                assert_eq!(row[col], Cell::Float(1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(run(&args(Family::Single, &[0.01], &[1], 0)).unwrap_err().exit_code(), 2);
        assert_eq!(run(&args(Family::Single, &[0.01], &[3], 10)).unwrap_err().exit_code(), 2);
        assert_eq!(run(&args(Family::Single, &[-0.01], &[1], 10)).unwrap_err().exit_code(), 2);
        let mut a = args(Family::Single, &[0.01], &[1], 10);
        a.gate = "Q".into();
        assert_eq!(run(&a).unwrap_err().exit_code(), 2);
        let mut a = args(Family::Single, &[0.01], &[1], 10);
        a.big_n = vec!["inf".parse().unwrap()];
        assert_eq!(run(&a).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn report_needs_three_copy_counts() {
        assert!(run(&args(Family::Single, &[0.02], &[1, 2], 500)).unwrap().report.is_none());
        let out = run(&args(Family::Single, &[0.02], &[1, 2, 4], 500)).unwrap();
        let r = out.report.unwrap();
        assert_eq!(r.total_samples, 1500);
        assert_eq!(r.residuals.len(), 3);
    }

    #[test]
    fn variant_columns_follow_the_fixed_ones() {
        let out = run(&args(Family::Type2, &[0.01], &[2], 50)).unwrap();
        assert_eq!(
            &out.table.columns[FIXED_COLUMNS.len()..],
            ["ps:main-text", "ps:appendix", "fidelity:main-text", "fidelity:appendix"]
        );
    }
}
