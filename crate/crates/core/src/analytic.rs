//! Closed-form success probabilities, fidelities and effective rates.
//!
//! Several printed expansions disagree at second order in `ν`. Each one is
//! kept as its own [`FormulaVariant`] or form so that Monte Carlo data can
//! pick between them.

use core::fmt;
use core::str::FromStr;

use num_traits::Float;

use crate::{Error, Result};

/// Number of averaged copies, with `N → ∞` as a limit value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Copies {
    Finite(u64),
    Infinite,
}

impl Copies {
    /// `1/N`, zero in the limit.
    pub fn inv(self) -> Result<f64> {
        match self {
            Copies::Finite(0) => Err(Error::InvalidParameter { name: "N", value: 0.0 }),
            Copies::Finite(n) => Ok(1.0 / n as f64),
            Copies::Infinite => Ok(0.0),
        }
    }
}

impl From<u64> for Copies {
    fn from(n: u64) -> Self {
        Copies::Finite(n)
    }
}

impl fmt::Display for Copies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Copies::Finite(n) => write!(f, "{n}"),
            Copies::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Copies {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Copies::Infinite);
        }
        match t.parse::<u64>() {
            Ok(n) if n >= 1 => Ok(Copies::Finite(n)),
            _ => Err(Error::InvalidParameter { name: "N", value: f64::NAN }),
        }
    }
}

/// Printed single-qubit success-probability expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaVariant {
    /// `1 − 3ν + 3ν/N + 9ν²/2 − 9ν²/2N`
    MainText,
    /// `1 − 3ν + 3ν/N + 9ν²/4 + 3ν²/N`
    Appendix2nd,
    /// `1 − 3ν + 3ν/N + 4ν² − 4ν²/N − 21ν³/8 + ν³/12N + 49ν⁴/64 + 13ν⁴/6N`
    Appendix4th,
}

impl FormulaVariant {
    pub const ALL: [FormulaVariant; 3] = [FormulaVariant::MainText, FormulaVariant::Appendix2nd, FormulaVariant::Appendix4th];

    pub fn name(self) -> &'static str {
        match self {
            FormulaVariant::MainText => "main-text",
            FormulaVariant::Appendix2nd => "appendix-2nd-order",
            FormulaVariant::Appendix4th => "appendix-4th-order",
        }
    }

    /// Coefficients `(a, b)` of the `ν²` term written as `a + b/N`.
    pub fn nu2_coefficients(self) -> (f64, f64) {
        match self {
            FormulaVariant::MainText => (4.5, -4.5),
            FormulaVariant::Appendix2nd => (2.25, 3.0),
            FormulaVariant::Appendix4th => (4.0, -4.0),
        }
    }
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaVariant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::UnknownGate(s.into()))
    }
}

/// Printed single-qubit fidelity expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FidelityForm {
    /// `(1 − 3ν + 9ν²/4) / (1 − 3ν + ν/N + 9ν²/2 − 9ν²/2N)`, denominator as printed.
    MainTextPrinted,
    /// Same numerator over the main-text success probability (`3ν/N`).
    MainTextEq13Denominator,
    /// `(1 − 3ν/2 + 7ν²/8)² / (1 − 3ν + 3ν/N + 4ν² − 4ν²/N)`
    Appendix,
    /// Appendix form with the numerator cut at `ν²`: `(1 − 3ν + 4ν²) / (…)`.
    AppendixTruncated,
}

impl FidelityForm {
    pub const ALL: [FidelityForm; 4] = [
        FidelityForm::MainTextPrinted,
        FidelityForm::MainTextEq13Denominator,
        FidelityForm::Appendix,
        FidelityForm::AppendixTruncated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FidelityForm::MainTextPrinted => "main-text-printed",
            FidelityForm::MainTextEq13Denominator => "main-text-3nu-denominator",
            FidelityForm::Appendix => "appendix",
            FidelityForm::AppendixTruncated => "appendix-truncated",
        }
    }
}

impl fmt::Display for FidelityForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Printed Type-II fusion expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Type2Variant {
    /// `ν²` coefficient 2, Gaussian moments.
    MainText,
    /// `ν²` coefficient 5/3, `⟨δ⁴⟩ = ν²`.
    Appendix,
}

impl Type2Variant {
    pub const ALL: [Type2Variant; 2] = [Type2Variant::MainText, Type2Variant::Appendix];

    pub fn name(self) -> &'static str {
        match self {
            Type2Variant::MainText => "main-text",
            Type2Variant::Appendix => "appendix",
        }
    }

    pub fn nu2_coefficient(self) -> f64 {
        match self {
            Type2Variant::MainText => 2.0,
            Type2Variant::Appendix => 5.0 / 3.0,
        }
    }
}

/// Four-mode success probability: as printed, and the sibling whose last
/// term carries `1/N` like every other expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourModeVariant {
    /// `… + 18ν² − 18ν²/N²`
    Printed,
    /// `… + 18ν² − 18ν²/N`
    InverseN,
}

impl FourModeVariant {
    pub const ALL: [FourModeVariant; 2] = [FourModeVariant::Printed, FourModeVariant::InverseN];

    pub fn name(self) -> &'static str {
        match self {
            FourModeVariant::Printed => "printed-1/N^2",
            FourModeVariant::InverseN => "sibling-1/N",
        }
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "nu", value: nu })
    }
}

fn ratio(formula: &'static str, num: f64, den: f64) -> Result<f64> {
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::OutOfValidity { formula, value: den })
    }
}

fn positive(formula: &'static str, p: f64) -> Result<f64> {
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::OutOfValidity { formula, value: p })
    }
}

/// Single-qubit success probability.
pub fn ps_single(nu: f64, n: Copies, variant: FormulaVariant) -> Result<f64> {
    check_nu(nu)?;
    let r = n.inv()?;
    let first = 1.0 - 3.0 * nu + 3.0 * nu * r;
    let (a, b) = variant.nu2_coefficients();
    let mut p = first + nu * nu * (a + b * r);
    if variant == FormulaVariant::Appendix4th {
        let nu3 = nu * nu * nu;
        p += -21.0 / 8.0 * nu3 + nu3 * r / 12.0 + 49.0 / 64.0 * nu3 * nu + 13.0 / 6.0 * nu3 * nu * r;
    }
    Ok(p)
}

/// Single-qubit post-selected fidelity.
pub fn fidelity_single(nu: f64, n: Copies, form: FidelityForm) -> Result<f64> {
    check_nu(nu)?;
    let r = n.inv()?;
    let nu2 = nu * nu;
    match form {
        FidelityForm::MainTextPrinted => {
            let den = 1.0 - 3.0 * nu + nu * r + 4.5 * nu2 - 4.5 * nu2 * r;
            ratio("single-qubit fidelity", 1.0 - 3.0 * nu + 2.25 * nu2, den)
        }
        FidelityForm::MainTextEq13Denominator => {
            let den = ps_single(nu, n, FormulaVariant::MainText)?;
            ratio("single-qubit fidelity", 1.0 - 3.0 * nu + 2.25 * nu2, den)
        }
        FidelityForm::Appendix | FidelityForm::AppendixTruncated => {
            let den = 1.0 - 3.0 * nu + 3.0 * nu * r + 4.0 * nu2 - 4.0 * nu2 * r;
            let num = if form == FidelityForm::Appendix {
                let a = 1.0 - 1.5 * nu + 0.875 * nu2;
                a * a
            } else {
                1.0 - 3.0 * nu + 4.0 * nu2
            };
            ratio("single-qubit fidelity", num, den)
        }
    }
}

/// Four-mode two-qubit gate success probability.
pub fn ps_4mode(nu: f64, n: Copies, variant: FourModeVariant) -> Result<f64> {
    check_nu(nu)?;
    let r = n.inv()?;
    let tail = match variant {
        FourModeVariant::Printed => r * r,
        FourModeVariant::InverseN => r,
    };
    Ok(1.0 - 6.0 * nu + 6.0 * nu * r + 18.0 * nu * nu * (1.0 - tail))
}

/// `P⁻¹ (1 − 6ν)` with the printed four-mode `P`.
pub fn fidelity_4mode(nu: f64, n: Copies) -> Result<f64> {
    let p = positive("four-mode success probability", ps_4mode(nu, n, FourModeVariant::Printed)?)?;
    Ok((1.0 - 6.0 * nu) / p)
}

/// Type-II fusion success probability.
pub fn ps_type2(nu: f64, n: Copies, variant: Type2Variant) -> Result<f64> {
    check_nu(nu)?;
    let r = n.inv()?;
    let c = variant.nu2_coefficient();
    Ok(1.0 - 2.0 * nu + 2.0 * nu * r + c * nu * nu * (1.0 - r))
}

/// `P⁻¹ (1 − 2ν + c ν²)` for the variant's `c`.
pub fn fidelity_type2(nu: f64, n: Copies, variant: Type2Variant) -> Result<f64> {
    let p = positive("Type-II success probability", ps_type2(nu, n, variant)?)?;
    Ok((1.0 - 2.0 * nu + variant.nu2_coefficient() * nu * nu) / p)
}

fn check_v(v: f64) -> Result<()> {
    if v.is_finite() && (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "V", value: v })
    }
}

/// `1 − V + V/N` for characteristic noise `V = d·ν`.
pub fn ps_first_order(v: f64, n: Copies) -> Result<f64> {
    check_v(v)?;
    Ok(1.0 - v + v * n.inv()?)
}

/// `1 − V/(N + V − NV)`
pub fn fidelity_first_order(v: f64, n: Copies) -> Result<f64> {
    check_v(v)?;
    match n {
        Copies::Infinite => Ok(1.0),
        Copies::Finite(_) => {
            let r = n.inv()?;
            // V/(N + V − NV) rewritten with 1/N to stay finite for large N
            Ok(1.0 - v * r / (1.0 + v * r - v))
        }
    }
}

/// Exact Gaussian-noise success probability `1/N + (1 − 1/N) e^{−dν}` for a
/// circuit whose paths each cross `d` noisy angles.
pub fn ps_gaussian_exact(depth: u32, nu: f64, n: Copies) -> Result<f64> {
    check_nu(nu)?;
    let r = n.inv()?;
    Ok(r + (1.0 - r) * (-(depth as f64) * nu).exp())
}

/// Physical rates and their averaged counterparts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtPoint {
    pub epsilon: f64,
    pub gamma: f64,
    pub n: u64,
    /// `E`
    pub effective_error: f64,
    /// `Γ`
    pub effective_loss: f64,
}

fn check_rate(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value: x })
    }
}

/// `Γ = (γ/3)(3 + 2 log₂ N) + ε(1 − 1/N)` and `E = ε / (N + ε − Nε)`.
pub fn effective_rates(epsilon: f64, gamma: f64, n: u64) -> Result<FtPoint> {
    check_rate("epsilon", epsilon)?;
    check_rate("gamma", gamma)?;
    if n == 0 {
        return Err(Error::InvalidParameter { name: "N", value: 0.0 });
    }
    if n == 1 {
        return Ok(FtPoint { epsilon, gamma, n, effective_error: epsilon, effective_loss: gamma });
    }
    let nf = n as f64;
    let effective_loss = gamma / 3.0 * (3.0 + 2.0 * nf.log2()) + epsilon * (1.0 - 1.0 / nf);
    let effective_error = epsilon / (nf + epsilon - nf * epsilon);
    Ok(FtPoint { epsilon, gamma, n, effective_error, effective_loss })
}
