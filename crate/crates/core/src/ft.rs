//! Fault-tolerance regions under the effective-rate map.
//!
//! A [`ThresholdCurve`] bounds the region of `(ε, γ)` where a code is fault
//! tolerant without averaging. A point is fault tolerant with `N` copies when
//! its mapped `(E, Γ)` lies on or below the curve.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::analytic::{effective_rates, FtPoint};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCurve {
    name: String,
    /// `(ε, γ)` with `ε` strictly increasing and `γ` non-increasing.
    points: Vec<(f64, f64)>,
}

impl ThresholdCurve {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::MalformedCurve(format!("need at least 2 points, found {}", points.len())));
        }
        for (i, &(e, g)) in points.iter().enumerate() {
            if !(e > 0.0 && e < 1.0 && g > 0.0 && g < 1.0) {
                return Err(Error::MalformedCurve(format!("point {} ({e}, {g}) is outside (0, 1)", i + 1)));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::MalformedCurve(format!("epsilon not strictly increasing at point {}", i + 2)));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::MalformedCurve(format!("gamma increases at point {}", i + 2)));
            }
        }
        Ok(Self { name: name.into(), points })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `(ε_min, ε_max)`
    pub fn extent(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Loss threshold at error rate `epsilon`, interpolated linearly in
    /// `(ln ε, ln γ)`. `None` outside the curve's `ε` extent.
    pub fn gamma_at(&self, epsilon: f64) -> Option<f64> {
        let (lo, hi) = self.extent();
        if !(epsilon >= lo && epsilon <= hi) {
            return None;
        }
        let k = self.points.partition_point(|p| p.0 <= epsilon);
        if k == self.points.len() {
            return Some(self.points[k - 1].1);
        }
        let (e0, g0) = self.points[k - 1];
        let (e1, g1) = self.points[k];
        if epsilon == e0 {
            return Some(g0);
        }
        let t = (epsilon.ln() - e0.ln()) / (e1.ln() - e0.ln());
        Some((g0.ln() + t * (g1.ln() - g0.ln())).exp())
    }

    /// Raw membership of `(ε, γ)` with no averaging.
    pub fn contains(&self, epsilon: f64, gamma: f64) -> bool {
        self.gamma_at(epsilon).is_some_and(|g| gamma <= g)
    }

    /// The same curve with the log-log midpoint inserted in every segment.
    pub fn densified(&self) -> Self {
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            let (e0, g0) = w[0];
            let (e1, g1) = w[1];
            points.push(w[0]);
            points.push(((e0 * e1).sqrt(), (g0 * g1).sqrt()));
        }
        points.push(self.points[self.points.len() - 1]);
        Self { name: self.name.clone(), points }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionQuery {
    pub epsilon: f64,
    pub gamma: f64,
    pub n: u64,
}

impl RegionQuery {
    pub fn new(epsilon: f64, gamma: f64, n: u64) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::InvalidParameter { name: "N", value: n as f64 });
        }
        Ok(Self { epsilon, gamma, n })
    }
}

/// Maps the query through the effective rates and tests it against the curve.
pub fn is_fault_tolerant(q: &RegionQuery, curve: &ThresholdCurve) -> Result<bool> {
    Ok(classify(q, curve)?.fault_tolerant)
}

/// One row of a region sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub point: FtPoint,
    pub fault_tolerant: bool,
}

fn classify(q: &RegionQuery, curve: &ThresholdCurve) -> Result<SweepRow> {
    if !q.n.is_power_of_two() {
        return Err(Error::InvalidParameter { name: "N", value: q.n as f64 });
    }
    let point = effective_rates(q.epsilon, q.gamma, q.n)?;
    Ok(SweepRow { point, fault_tolerant: curve.contains(point.effective_error, point.effective_loss) })
}

/// Verdict for every `(ε, γ, N)` in grid order: `ε` outermost, then `γ`,
/// then `N`.
pub fn sweep_region(epsilons: &[f64], gammas: &[f64], ns: &[u64], curve: &ThresholdCurve) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(epsilons.len() * gammas.len() * ns.len());
    for &e in epsilons {
        for &g in gammas {
            for &n in ns {
                rows.push(classify(&RegionQuery { epsilon: e, gamma: g, n }, curve)?);
            }
        }
    }
    Ok(rows)
}

/// Smallest candidate `N` at which the point is fault tolerant.
pub fn best_n(epsilon: f64, gamma: f64, candidates: &[u64], curve: &ThresholdCurve) -> Result<Option<u64>> {
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    for n in sorted {
        if is_fault_tolerant(&RegionQuery::new(epsilon, gamma, n)?, curve)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
