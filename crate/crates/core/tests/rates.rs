use proptest::prelude::*;
use uavg_core::analytic::{effective_rates, ps_first_order, Copies};
use uavg_core::ft::{best_n, is_fault_tolerant, sweep_region, RegionQuery, ThresholdCurve};

/// Same points as the shipped synthetic example curve.
fn synthetic() -> ThresholdCurve {
    ThresholdCurve::new(
        "synthetic",
        vec![(1e-12, 4e-2), (1e-5, 3.5e-2), (1e-4, 3e-2), (1e-3, 2e-2), (3e-3, 1e-2), (6e-3, 5e-3), (1e-2, 1e-3)],
    )
    .unwrap()
}

fn flat() -> ThresholdCurve {
    ThresholdCurve::new("flat", vec![(1e-12, 1e-2), (1e-2, 1e-2)]).unwrap()
}

fn powers() -> Vec<u64> {
    (0..=10).map(|k| 1u64 << k).collect()
}

fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / steps as f64).exp()).collect()
}

fn ft(eps: f64, gamma: f64, n: u64, curve: &ThresholdCurve) -> bool {
    is_fault_tolerant(&RegionQuery::new(eps, gamma, n).unwrap(), curve).unwrap()
}

#[test]
fn one_copy_is_the_identity_map() {
    for eps in log_grid(1e-6, 0.5, 30) {
        for gamma in log_grid(1e-6, 0.5, 30) {
            let p = effective_rates(eps, gamma, 1).unwrap();
            assert_eq!((p.effective_error, p.effective_loss), (eps, gamma));
            assert_eq!(ft(eps, gamma, 1, &synthetic()), synthetic().contains(eps, gamma));
        }
    }
}

#[test]
fn rates_are_strictly_monotone_in_copies() {
    for eps in log_grid(1e-5, 0.3, 12) {
        for gamma in log_grid(1e-5, 0.3, 12) {
            let pts: Vec<_> = powers().iter().map(|&n| effective_rates(eps, gamma, n).unwrap()).collect();
            for w in pts.windows(2) {
                assert!(w[1].effective_loss > w[0].effective_loss, "{w:?}");
                assert!(w[1].effective_error < w[0].effective_error, "{w:?}");
            }
        }
    }
}

#[test]
fn rate_spot_values() {
    let p = effective_rates(0.001, 0.001, 4).unwrap();
    assert!((p.effective_loss - 0.00308333333).abs() < 1e-9);
    assert!((p.effective_error - 0.000250187).abs() < 1e-9);
}

#[test]
fn error_vanishes_and_loss_grows_logarithmically() {
    let big = effective_rates(0.01, 0.001, 1 << 40).unwrap();
    assert!(big.effective_error < 1e-13);
    // each doubling adds 2γ/3 plus a shrinking ε/(2N)
    let a = effective_rates(0.01, 0.001, 1 << 20).unwrap();
    let b = effective_rates(0.01, 0.001, 1 << 21).unwrap();
    assert!((b.effective_loss - a.effective_loss - 2.0 * 0.001 / 3.0).abs() < 1e-8);
}

#[test]
fn loss_free_region_grows_with_copies() {
    let curve = synthetic();
    for eps in log_grid(1e-6, 0.5, 400) {
        let verdicts: Vec<bool> = powers().iter().map(|&n| ft(eps, 0.0, n, &curve)).collect();
        assert!(verdicts.windows(2).all(|w| w[1] || !w[0]), "eps={eps}: {verdicts:?}");
    }
}

#[test]
fn loss_failures_persist_on_a_flat_threshold() {
    let curve = flat();
    for eps in log_grid(1e-6, 0.5, 60) {
        for gamma in log_grid(1e-5, 0.2, 60) {
            for (i, &n) in powers().iter().enumerate() {
                let p = effective_rates(eps, gamma, n).unwrap();
                if let Some(g) = curve.gamma_at(p.effective_error) {
                    if p.effective_loss > g {
                        assert!(powers()[i + 1..].iter().all(|&m| !ft(eps, gamma, m, &curve)));
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn sloped_threshold_can_recover_a_loss_failure() {
    // falling E lifts the threshold faster than Γ grows
    let curve = synthetic();
    let (eps, gamma) = (3.447e-3, 7.586e-3);
    let p = effective_rates(eps, gamma, 2).unwrap();
    assert!(p.effective_loss > curve.gamma_at(p.effective_error).unwrap());
    assert!(!ft(eps, gamma, 2, &curve));
    assert!(ft(eps, gamma, 4, &curve));
}

#[test]
fn best_n_cases() {
    let curve = synthetic();
    assert_eq!(best_n(1e-4, 1e-3, &powers(), &curve).unwrap(), Some(1));
    // outside the curve at N = 1, recovered by averaging
    assert!(!curve.contains(1.5e-2, 1e-4));
    let n = best_n(1.5e-2, 1e-4, &powers(), &curve).unwrap().unwrap();
    assert!(n > 1 && n <= 16);
    // on the flat ceiling any averaging adds loss
    assert_eq!(best_n(1e-3, 1e-2, &powers()[1..], &flat()).unwrap(), None);
}

#[test]
fn far_above_the_curve_nothing_passes() {
    let rows = sweep_region(&[1e-4, 1e-3], &[0.2, 0.5], &powers(), &synthetic()).unwrap();
    assert!(rows.iter().all(|r| !r.fault_tolerant));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn verdicts_survive_densification(le in -9.0f64..-1.0, lg in -6.0f64..-0.5, k in 0u32..11) {
        let (eps, gamma) = (10f64.powf(le), 10f64.powf(lg));
        let curve = synthetic();
        let dense = curve.densified().densified();
        prop_assert_eq!(ft(eps, gamma, 1 << k, &curve), ft(eps, gamma, 1 << k, &dense));
    }

    #[test]
    fn effective_rates_stay_in_range(eps in 0.0f64..0.999, gamma in 0.0f64..0.999, k in 0u32..20) {
        let p = effective_rates(eps, gamma, 1 << k).unwrap();
        prop_assert!(p.effective_error <= eps && p.effective_error >= 0.0);
        prop_assert!(p.effective_loss >= gamma);
    }

    #[test]
    fn loss_term_is_one_minus_success(v in 0.0f64..0.9, k in 0u32..12) {
        let n = 1u64 << k;
        let p = effective_rates(v, 0.0, n).unwrap();
        prop_assert!((p.effective_loss - (1.0 - ps_first_order(v, Copies::Finite(n)).unwrap())).abs() < 1e-15);
    }
}
