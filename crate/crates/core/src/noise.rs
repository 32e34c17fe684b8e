//! Zero-mean angle noise and noisy parameter draws.

use alloc::vec::Vec;

use num_traits::Float;
use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal, StandardUniform};

use crate::gates::Parameterized;
use crate::{Error, Result};

/// Shape of the per-angle noise distribution. All kinds have zero mean, zero
/// third moment and variance `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Normal, fourth moment `3ν²`.
    Gaussian,
    /// Uniform on `[-sqrt(3ν), sqrt(3ν)]`, fourth moment `9ν²/5`.
    UniformMatched,
    /// Symmetric three-point law with the given fourth moment `m4 ≥ ν²`:
    /// `±sqrt(m4/ν)` with probability `ν²/(2 m4)` each, otherwise 0.
    /// `m4 = ν²` is the two-point law `±sqrt(ν)`.
    FourMoment { m4: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    variance: f64,
    kind: NoiseKind,
}

impl NoiseSpec {
    pub fn new(variance: f64, kind: NoiseKind) -> Result<Self> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InvalidParameter { name: "noise variance", value: variance });
        }
        if let NoiseKind::FourMoment { m4 } = kind {
            // m4 >= ν² is required for a valid probability; allow rounding slack
            if !m4.is_finite() || m4 < variance * variance * (1.0 - 1e-12) || (variance > 0.0 && m4 <= 0.0) {
                return Err(Error::InvalidParameter { name: "fourth moment", value: m4 });
            }
        }
        Ok(Self { variance, kind })
    }

    pub fn gaussian(variance: f64) -> Result<Self> {
        Self::new(variance, NoiseKind::Gaussian)
    }

    /// Two-point law with `⟨δ⁴⟩ = ν²`.
    pub fn kurtosis_one(variance: f64) -> Result<Self> {
        Self::new(variance, NoiseKind::FourMoment { m4: variance * variance })
    }

    pub fn none() -> Self {
        Self { variance: 0.0, kind: NoiseKind::Gaussian }
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    /// `⟨δ⁴⟩` of the distribution.
    pub fn fourth_moment(&self) -> f64 {
        let v = self.variance;
        match self.kind {
            NoiseKind::Gaussian => 3.0 * v * v,
            NoiseKind::UniformMatched => 1.8 * v * v,
            NoiseKind::FourMoment { m4 } => m4,
        }
    }

    /// One draw.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let v = self.variance;
        if v == 0.0 {
            return 0.0;
        }
        match self.kind {
            NoiseKind::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                z * v.sqrt()
            }
            NoiseKind::UniformMatched => {
                let u: f64 = StandardUniform.sample(rng);
                (2.0 * u - 1.0) * (3.0 * v).sqrt()
            }
            NoiseKind::FourMoment { m4 } => {
                let p = (v * v / m4).min(1.0);
                let amplitude = (m4 / v).sqrt();
                let u: f64 = StandardUniform.sample(rng);
                if u < 0.5 * p {
                    amplitude
                } else if u < p {
                    -amplitude
                } else {
                    0.0
                }
            }
        }
    }
}

/// A target parameter set together with the deltas of one noisy copy.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledParams<P> {
    pub base: P,
    pub deltas: Vec<f64>,
}

impl<P: Parameterized> SampledParams<P> {
    /// Angles of the noisy copy: `base + deltas`.
    pub fn params(&self) -> P {
        self.base.perturbed(&self.deltas)
    }
}

/// Draws one delta per angle, in angle order.
pub fn sample_noisy<P: Parameterized, R: RngCore + ?Sized>(base: &P, noise: &NoiseSpec, rng: &mut R) -> SampledParams<P> {
    let deltas = (0..P::COUNT).map(|_| noise.sample(rng)).collect();
    SampledParams { base: base.clone(), deltas }
}
