//! Picks the printed second-order expansion that best fits Monte Carlo data.
//!
//! Every expansion shares the first-order law `1 − dν + dν/N`. The residual
//! `(P_s − first order)/ν²` is fitted by weighted least squares against
//! `{1, 1/N, 1/N²}`, and each printed candidate is scored by its `χ²`
//! against the residuals directly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::analytic::{FormulaVariant, FourModeVariant, Type2Variant};
use crate::{Error, Result};

/// Smallest residual uncertainty, in units of the `ν²` coefficient. Grid
/// points with zero spread (a single copy has `P_s = 1` exactly) are pinned
/// to this precision instead of infinite weight.
pub const SIGMA_FLOOR: f64 = 1e-6;

/// One Monte Carlo success-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub nu: f64,
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// A printed `ν²` coefficient `c₀ + c₁/N + c₂/N²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub coeffs: [f64; 3],
}

impl Candidate {
    pub fn new(name: impl Into<String>, coeffs: [f64; 3]) -> Self {
        Self { name: name.into(), coeffs }
    }

    pub fn at(&self, n: u64) -> f64 {
        let r = 1.0 / n as f64;
        self.coeffs[0] + self.coeffs[1] * r + self.coeffs[2] * r * r
    }
}

pub fn single_qubit_candidates() -> Vec<Candidate> {
    FormulaVariant::ALL
        .iter()
        .map(|v| {
            let (a, b) = v.nu2_coefficients();
            Candidate::new(v.name(), [a, b, 0.0])
        })
        .collect()
}

pub fn type2_candidates() -> Vec<Candidate> {
    Type2Variant::ALL
        .iter()
        .map(|v| {
            let c = v.nu2_coefficient();
            Candidate::new(v.name(), [c, -c, 0.0])
        })
        .collect()
}

pub fn four_mode_candidates() -> Vec<Candidate> {
    FourModeVariant::ALL
        .iter()
        .map(|v| match v {
            FourModeVariant::Printed => Candidate::new(v.name(), [18.0, 0.0, -18.0]),
            FourModeVariant::InverseN => Candidate::new(v.name(), [18.0, -18.0, 0.0]),
        })
        .collect()
}

/// Seed of grid point `k` derived from a master seed.
pub fn point_seed(master: u64, k: usize) -> u64 {
    master ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub nu: f64,
    pub n: u64,
    pub value: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationReport {
    pub family: String,
    pub depth: u32,
    pub residuals: Vec<Residual>,
    /// Fitted `(c₀, c₁, c₂)`.
    pub fit: [f64; 3],
    pub fit_stderr: [f64; 3],
    /// `χ²` of each candidate, in candidate order.
    pub chi2: Vec<(String, f64)>,
    pub selected: String,
    /// `χ²` gap between the runner-up and the selected candidate.
    pub delta_chi2: f64,
    pub total_samples: u64,
}

/// Least squares on rows already divided by their sigma, by Householder QR.
fn weighted_fit(rows: &[[f64; 3]], rhs: &[f64]) -> Option<([f64; 3], [f64; 3])> {
    let m = rows.len();
    if m < 3 {
        return None;
    }
    let mut a: Vec<[f64; 3]> = rows.to_vec();
    let mut b = rhs.to_vec();
    for k in 0..3 {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in k..3 {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vv;
            for i in k..m {
                a[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vv;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let r = [[a[0][0], a[0][1], a[0][2]], [0.0, a[1][1], a[1][2]], [0.0, 0.0, a[2][2]]];
    if r.iter().enumerate().any(|(i, row)| row[i] == 0.0) {
        return None;
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|j| r[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i][i];
    }
    // R⁻¹ by back substitution, then diag(R⁻¹ R⁻ᵀ)
    let mut rinv = [[0.0; 3]; 3];
    for col in 0..3 {
        for i in (0..3).rev() {
            let e = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (i + 1..3).map(|j| r[i][j] * rinv[j][col]).sum();
            rinv[i][col] = (e - s) / r[i][i];
        }
    }
    let se = core::array::from_fn(|i| rinv[i].iter().map(|v| v * v).sum::<f64>().sqrt());
    Some((x, se))
}

/// Scores `candidates` against grid estimates for a family with path depth
/// `depth`.
pub fn variant_discrimination(
    family: &str,
    depth: u32,
    points: &[GridPoint],
    candidates: &[Candidate],
) -> Result<DiscriminationReport> {
    if candidates.is_empty() {
        return Err(Error::EmptyUnits);
    }
    let d = depth as f64;
    let residuals: Vec<Residual> = points
        .iter()
        .map(|p| {
            if !(p.nu > 0.0) || p.n == 0 {
                return Err(Error::InvalidParameter { name: "grid point nu", value: p.nu });
            }
            let first = 1.0 - d * p.nu + d * p.nu / p.n as f64;
            let nu2 = p.nu * p.nu;
            Ok(Residual { nu: p.nu, n: p.n, value: (p.mean - first) / nu2, sigma: (p.stderr / nu2).max(SIGMA_FLOOR) })
        })
        .collect::<Result<_>>()?;

    let rows: Vec<[f64; 3]> = residuals
        .iter()
        .map(|r| {
            let inv = 1.0 / r.n as f64;
            [1.0 / r.sigma, inv / r.sigma, inv * inv / r.sigma]
        })
        .collect();
    let rhs: Vec<f64> = residuals.iter().map(|r| r.value / r.sigma).collect();
    let (fit, fit_stderr) = weighted_fit(&rows, &rhs).unwrap_or(([f64::NAN; 3], [f64::NAN; 3]));

    let chi2: Vec<(String, f64)> = candidates
        .iter()
        .map(|c| {
            let x: f64 = residuals.iter().map(|r| ((r.value - c.at(r.n)) / r.sigma).powi(2)).sum();
            (c.name.clone(), x)
        })
        .collect();
    let mut order: Vec<usize> = (0..chi2.len()).collect();
    order.sort_by(|&a, &b| chi2[a].1.total_cmp(&chi2[b].1));
    let selected = chi2[order[0]].0.clone();
    let delta_chi2 = if order.len() > 1 { chi2[order[1]].1 - chi2[order[0]].1 } else { f64::INFINITY };

    Ok(DiscriminationReport {
        family: family.into(),
        depth,
        residuals,
        fit,
        fit_stderr,
        chi2,
        selected,
        delta_chi2,
        total_samples: 0,
    })
}

impl fmt::Display for DiscriminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {} (path depth {})", self.family, self.depth)?;
        writeln!(f, "samples: {}", self.total_samples)?;
        writeln!(f, "residual (P_s - first order)/nu^2 per grid point:")?;
        for r in &self.residuals {
            writeln!(f, "  nu={:<8} N={:<4} {:+.6} +/- {:.6}", r.nu, r.n, r.value, r.sigma)?;
        }
        writeln!(
            f,
            "fit c0 + c1/N + c2/N^2: c0={:+.4}({:.4}) c1={:+.4}({:.4}) c2={:+.4}({:.4})",
            self.fit[0], self.fit_stderr[0], self.fit[1], self.fit_stderr[1], self.fit[2], self.fit_stderr[2]
        )?;
        for (name, x) in &self.chi2 {
            writeln!(f, "  chi2[{name}] = {}", fmt_chi2(*x))?;
        }
        writeln!(f, "selected: {} (delta chi2 to runner-up {})", self.selected, fmt_chi2(self.delta_chi2))
    }
}

fn fmt_chi2(x: f64) -> String {
    if x.abs() >= 1e6 {
        format!("{x:.3e}")
    } else {
        format!("{x:.3}")
    }
}
