//! Ensemble estimates of the success probability and post-selected fidelity.
//!
//! Sample `i` draws all of its noise from a ChaCha8 stream keyed by the
//! master seed with stream number `i`. Samples are grouped into blocks of
//! [`BLOCK_SIZE`] consecutive indices; each block keeps compensated moment
//! sums and blocks are merged in index order. The result therefore depends
//! only on the configuration, never on how blocks are scheduled.

mod accumulate;
pub mod discrimination;

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use accumulate::{BlockSums, Neumaier, SampleValues};
pub use discrimination::{variant_discrimination, Candidate, DiscriminationReport, GridPoint};

use crate::averaging::{averaged_operator, AveragingConfig, EncodedCircuit, PostSelection};
use crate::fock::PhotonicState;
use crate::gates::{FourModeParams, FusionParams, GateParams, Parameterized};
use crate::matrix::ModeMatrix;
use crate::noise::{sample_noisy, NoiseSpec};
use crate::{Error, Result};

/// Samples per reduction block.
pub const BLOCK_SIZE: u64 = 4096;

/// How the post-selected fidelity is formed from the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `⟨|⟨Ψ|𝒰|ψ⟩|²⟩ / ⟨P_s⟩`
    RatioOfMeans,
    /// `⟨|⟨Ψ|𝒰|ψ⟩|² / P_s⟩`
    MeanOfRatios,
    /// `|⟨⟨Ψ|𝒰|ψ⟩⟩|² / ⟨P_s⟩`
    Coherent,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::RatioOfMeans, Estimator::MeanOfRatios, Estimator::Coherent];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::RatioOfMeans => "ratio-of-means",
            Estimator::MeanOfRatios => "mean-of-ratios",
            Estimator::Coherent => "coherent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub samples: u64,
    pub master_seed: u64,
    /// Payload input `|ψ⟩`.
    pub input: PhotonicState,
    pub estimator: Estimator,
}

impl McConfig {
    pub fn new(samples: u64, master_seed: u64, input: PhotonicState) -> Self {
        Self { samples, master_seed, input, estimator: Estimator::RatioOfMeans }
    }

    pub fn blocks(&self) -> u64 {
        self.samples.div_ceil(BLOCK_SIZE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Samples that entered the estimate.
    pub n: u64,
}

/// All estimates from one ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub ps: McEstimate,
    pub fidelity_ratio_of_means: McEstimate,
    pub fidelity_mean_of_ratios: McEstimate,
    pub fidelity_coherent: McEstimate,
    /// Samples with `P_s = 0`, dropped from the mean of ratios.
    pub excluded: u64,
}

impl McSummary {
    pub fn fidelity(&self, e: Estimator) -> McEstimate {
        match e {
            Estimator::RatioOfMeans => self.fidelity_ratio_of_means,
            Estimator::MeanOfRatios => self.fidelity_mean_of_ratios,
            Estimator::Coherent => self.fidelity_coherent,
        }
    }

    /// Turns merged moment sums into estimates; ratio estimators use the
    /// delta method for their standard errors.
    pub fn from_sums(s: &BlockSums) -> Self {
        let n = s.count as f64;
        let (mp, ma, mr, mi) = (s.mean(0), s.mean(1), s.mean(2), s.mean(3));
        let ps = McEstimate { mean: mp, stderr: (s.cov(0, 0) / n).sqrt(), n: s.count };

        let rom = mp.recip() * ma;
        let rom_var =
            (s.cov(1, 1) / (mp * mp) - 2.0 * ma * s.cov(0, 1) / (mp * mp * mp) + ma * ma * s.cov(0, 0) / (mp * mp * mp * mp)) / n;

        let g = (mr * mr + mi * mi) / mp;
        let grad = [-g / mp, 2.0 * mr / mp, 2.0 * mi / mp];
        let idx = [0usize, 2, 3];
        let mut coh_var = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                coh_var += grad[a] * grad[b] * s.cov(idx[a], idx[b]);
            }
        }
        coh_var /= n;

        let (mor, mor_var) = s.ratio_mean_var();
        let rn = s.ratio_count as f64;
        McSummary {
            ps,
            fidelity_ratio_of_means: McEstimate { mean: rom, stderr: rom_var.max(0.0).sqrt(), n: s.count },
            fidelity_mean_of_ratios: McEstimate { mean: mor, stderr: (mor_var / rn).sqrt(), n: s.ratio_count },
            fidelity_coherent: McEstimate { mean: g, stderr: coh_var.max(0.0).sqrt(), n: s.count },
            excluded: s.excluded,
        }
    }
}

/// One random realisation per call.
pub trait SampleKernel: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<SampleValues>;
}

fn stream(master: &ChaCha8Rng, index: u64) -> ChaCha8Rng {
    let mut r = master.clone();
    r.set_stream(index);
    r.set_word_pos(0);
    r
}

/// Moment sums of block `block` (samples `block·BLOCK_SIZE ..`).
pub fn run_block<K: SampleKernel + ?Sized>(kernel: &K, cfg: &McConfig, block: u64) -> Result<BlockSums> {
    let master = ChaCha8Rng::seed_from_u64(cfg.master_seed);
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(cfg.samples);
    let mut sums = BlockSums::default();
    for i in start..end {
        sums.push(kernel.sample(&mut stream(&master, i))?);
    }
    Ok(sums)
}

/// Merges block sums in index order.
pub fn merge_blocks<'a>(blocks: impl IntoIterator<Item = &'a BlockSums>) -> BlockSums {
    let mut total = BlockSums::default();
    for b in blocks {
        total.absorb(b);
    }
    total
}

/// Runs every block on the calling thread.
pub fn run_sequential<K: SampleKernel + ?Sized>(kernel: &K, cfg: &McConfig) -> Result<McSummary> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter { name: "samples", value: 0.0 });
    }
    let blocks = (0..cfg.blocks()).map(|b| run_block(kernel, cfg, b)).collect::<Result<Vec<_>>>()?;
    Ok(McSummary::from_sums(&merge_blocks(&blocks)))
}

fn dense_or_fock(input: &PhotonicState) -> Result<Option<Vec<Complex64>>> {
    match input.photon_number() {
        1 => Ok(Some(input.single_photon_amplitudes()?)),
        2 => Ok(None),
        n => Err(Error::UnsupportedPhotonNumber(n)),
    }
}

/// `N` noisy copies of `target` averaged directly, `𝒰 = (1/N) Σ U_j`.
#[derive(Debug, Clone)]
pub struct AveragedKernel<P> {
    target: P,
    noise: NoiseSpec,
    copies: usize,
    input: PhotonicState,
    dense_input: Option<Vec<Complex64>>,
    target_out: PhotonicState,
    dense_target: Option<Vec<Complex64>>,
}

impl<P: Parameterized + Sync> AveragedKernel<P> {
    pub fn new(target: P, noise: NoiseSpec, copies: usize, input: &PhotonicState) -> Result<Self> {
        if !copies.is_power_of_two() {
            return Err(Error::InvalidParameter { name: "N", value: copies as f64 });
        }
        let u = target.matrix();
        if input.modes() != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), found: input.modes() });
        }
        let input = input.normalized().ok_or(Error::InvalidParameter { name: "input norm", value: 0.0 })?;
        let target_out = input.evolve(&u)?;
        let dense_input = dense_or_fock(&input)?;
        let dense_target = dense_or_fock(&target_out)?;
        Ok(Self { target, noise, copies, input, dense_input, target_out, dense_target })
    }

    /// `𝒰` for one realisation.
    pub fn draw_operator(&self, rng: &mut ChaCha8Rng) -> Result<ModeMatrix> {
        let units: Vec<ModeMatrix> =
            (0..self.copies).map(|_| sample_noisy(&self.target, &self.noise, rng).params().matrix()).collect();
        averaged_operator(&units)
    }
}

impl<P: Parameterized + Sync> SampleKernel for AveragedKernel<P> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<SampleValues> {
        let op = self.draw_operator(rng)?;
        match (&self.dense_input, &self.dense_target) {
            (Some(psi), Some(target)) => {
                let out = op.apply_to(psi)?;
                let ps = out.iter().map(|z| z.norm_sqr()).sum();
                let amp = target.iter().zip(&out).map(|(t, o)| t.conj() * o).sum();
                Ok(SampleValues { ps, amp })
            }
            _ => {
                let out = self.input.evolve(&op)?;
                Ok(SampleValues { ps: out.norm_sqr(), amp: self.target_out.inner(&out) })
            }
        }
    }
}

/// Full encoder/decoder tree with noisy units and optionally noisy splitters.
#[derive(Debug, Clone)]
pub struct EndToEndKernel {
    config: AveragingConfig,
    gate: GateParams,
    input: PhotonicState,
    target_out: PhotonicState,
}

impl EndToEndKernel {
    pub fn new(config: AveragingConfig, gate: GateParams, input: &PhotonicState) -> Result<Self> {
        if config.payload_modes != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: config.payload_modes });
        }
        let input = input.normalized().ok_or(Error::InvalidParameter { name: "input norm", value: 0.0 })?;
        let target_out = input.evolve(&gate.matrix())?;
        Ok(Self { config, gate, input, target_out })
    }
}

impl SampleKernel for EndToEndKernel {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<SampleValues> {
        let units: Vec<ModeMatrix> =
            (0..self.config.copies()).map(|_| sample_noisy(&self.gate, &self.config.gate_noise, rng).params().matrix()).collect();
        let circuit = match &self.config.encoder_noise {
            Some(e) => {
                let dev = e.sample(&self.config.layout(), self.config.payload_modes, rng);
                EncodedCircuit::build_with(&self.config, &units, &dev)?
            }
            None => EncodedCircuit::build(&self.config, &units)?,
        };
        match circuit.run_postselected(&self.input)? {
            PostSelection::Conditional { state, success_probability } => {
                Ok(SampleValues { ps: success_probability, amp: self.target_out.inner(&state) * success_probability.sqrt() })
            }
            PostSelection::HeraldCertain => Ok(SampleValues { ps: 0.0, amp: Complex64::zero() }),
        }
    }
}

/// Mean success probability of `N` averaged copies of `target`.
pub fn estimate_ps<P: Parameterized + Sync>(target: &P, noise: &NoiseSpec, copies: usize, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_all(target, noise, copies, cfg)?.ps)
}

/// Post-selected fidelity with the configured estimator.
pub fn estimate_fidelity<P: Parameterized + Sync>(
    target: &P,
    noise: &NoiseSpec,
    copies: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(estimate_all(target, noise, copies, cfg)?.fidelity(cfg.estimator))
}

pub fn estimate_all<P: Parameterized + Sync>(target: &P, noise: &NoiseSpec, copies: usize, cfg: &McConfig) -> Result<McSummary> {
    let kernel = AveragedKernel::new(target.clone(), *noise, copies, &cfg.input)?;
    run_sequential(&kernel, cfg)
}

/// Runs the physical tree circuit for every sample.
pub fn estimate_end_to_end(config: &AveragingConfig, gate: &GateParams, cfg: &McConfig) -> Result<McSummary> {
    if config.levels > 3 {
        return Err(Error::InvalidParameter { name: "levels", value: config.levels as f64 });
    }
    let kernel = EndToEndKernel::new(*config, *gate, &cfg.input)?;
    run_sequential(&kernel, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FusionKind {
    FourMode,
    Type2,
}

/// `(P_s, fidelity)` of an averaged two-qubit network; the input may carry
/// one or two photons.
pub fn estimate_fusion(kind: FusionKind, noise: &NoiseSpec, copies: usize, cfg: &McConfig) -> Result<(McEstimate, McEstimate)> {
    let s = match kind {
        FusionKind::FourMode => estimate_all(&FourModeParams::default(), noise, copies, cfg)?,
        FusionKind::Type2 => estimate_all(&FusionParams::IDEAL, noise, copies, cfg)?,
    };
    Ok((s.ps, s.fidelity(cfg.estimator)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::gates::NamedGate;
    use crate::noise::NoiseKind;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn h_input() -> PhotonicState {
        PhotonicState::basis(2, &[0]).unwrap()
    }

    #[test]
    fn noiseless_is_exact() {
        let cfg = McConfig::new(1000, 1, h_input());
        let s = estimate_all(&NamedGate::H.params(), &NoiseSpec::none(), 4, &cfg).unwrap();
        assert_eq!(s.ps.mean, 1.0);
        assert_eq!(s.ps.stderr, 0.0);
        for e in Estimator::ALL {
            assert!((s.fidelity(e).mean - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn block_scheduling_does_not_change_bits() {
        let cfg = McConfig::new(3 * BLOCK_SIZE + 17, 42, h_input());
        let noise = NoiseSpec::gaussian(0.01).unwrap();
        let k = AveragedKernel::new(NamedGate::X.params(), noise, 2, &cfg.input).unwrap();
        let seq = run_sequential(&k, &cfg).unwrap();
        let mut blocks: Vec<(u64, BlockSums)> = (0..cfg.blocks()).rev().map(|b| (b, run_block(&k, &cfg, b).unwrap())).collect();
        blocks.sort_by_key(|b| b.0);
        let merged = McSummary::from_sums(&merge_blocks(blocks.iter().map(|b| &b.1)));
        assert_eq!(seq, merged);
        assert_eq!(seq.ps.n, cfg.samples);
    }

    #[test]
    fn one_copy_keeps_unit_success() {
        let cfg = McConfig::new(20_000, 3, h_input());
        let s = estimate_all(&NamedGate::H.params(), &NoiseSpec::gaussian(0.01).unwrap(), 1, &cfg).unwrap();
        assert!((s.ps.mean - 1.0).abs() < 1e-12);
        // unaveraged fidelity deficit is about 3ν/2 for a single input
        assert!(s.fidelity_ratio_of_means.mean < 1.0);
    }

    #[test]
    fn two_photon_fusion_runs() {
        let input = PhotonicState::basis(4, &[0, 2]).unwrap();
        let cfg = McConfig::new(2000, 5, input);
        let (ps, f) = estimate_fusion(FusionKind::Type2, &NoiseSpec::none(), 2, &cfg).unwrap();
        assert!((ps.mean - 1.0).abs() < 1e-12);
        assert!((f.mean - 1.0).abs() < 1e-12);
        let noisy = NoiseSpec::new(0.01, NoiseKind::FourMoment { m4: 1e-4 }).unwrap();
        let (ps, _) = estimate_fusion(FusionKind::Type2, &noisy, 2, &cfg).unwrap();
        assert!(ps.mean < 1.0 && ps.mean > 0.9);
    }

    #[test]
    fn end_to_end_agrees_with_direct_average() {
        let plus = PhotonicState::single_photon(&[c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let cfg = McConfig::new(300, 11, plus);
        let mut config = AveragingConfig::new(1, 2);
        config.gate_noise = NoiseSpec::gaussian(0.02).unwrap();
        let tree = estimate_end_to_end(&config, &NamedGate::H.params(), &cfg).unwrap();
        let direct = estimate_all(&NamedGate::H.params(), &config.gate_noise, 2, &cfg).unwrap();
        // identical draws, identical operator up to rounding
        assert!((tree.ps.mean - direct.ps.mean).abs() < 1e-12);
        assert!((tree.fidelity_ratio_of_means.mean - direct.fidelity_ratio_of_means.mean).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        let cfg = McConfig::new(0, 1, h_input());
        assert!(estimate_ps(&NamedGate::H.params(), &NoiseSpec::none(), 2, &cfg).is_err());
        let cfg = McConfig::new(10, 1, h_input());
        assert!(estimate_ps(&NamedGate::H.params(), &NoiseSpec::none(), 3, &cfg).is_err());
        assert!(estimate_ps(&FusionParams::IDEAL, &NoiseSpec::none(), 2, &cfg).is_err());
    }
}
