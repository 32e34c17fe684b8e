//! Averaged and heralded operators and the Hadamard-tree interferometer that
//! realises them.
//!
//! Modes of the full circuit are copy-major: payload rail `r` of copy `j`
//! sits at mode `j·M + r`. The payload enters and leaves on copy 0; every
//! other copy is an error port that is post-selected on vacuum.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal, StandardUniform};

use crate::fock::PhotonicState;
use crate::gates::{GateParams, Parameterized};
use crate::matrix::{embed, ModeMatrix};
use crate::noise::NoiseSpec;
use crate::{Error, Result};

/// `(1/N) Σ_j U_j`
pub fn averaged_operator(units: &[ModeMatrix]) -> Result<ModeMatrix> {
    let first = units.first().ok_or(Error::EmptyUnits)?;
    let mut acc = ModeMatrix::zeros(first.dim());
    let inv = 1.0 / units.len() as f64;
    for u in units {
        if u.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: u.dim() });
        }
        acc.add_scaled_assign(u, inv);
    }
    Ok(acc)
}

/// Signs `f_j = ±1` attached to each copy in one output branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeraldWeights {
    signs: Vec<i8>,
}

impl HeraldWeights {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptyUnits);
        }
        if let Some(&bad) = signs.iter().find(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter { name: "herald sign", value: bad as f64 });
        }
        Ok(Self { signs })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// True for the all-plus success branch.
    pub fn is_success(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }
}

/// Row `branch` of the `levels`-fold tensor power of `[[1, 1], [1, -1]]`:
/// `f_j = (-1)^{popcount(j & branch)}`.
pub fn herald_weights(levels: u32, branch: usize) -> Result<HeraldWeights> {
    let copies = 1usize << levels;
    if branch >= copies {
        return Err(Error::BranchOutOfRange { branch, levels });
    }
    let signs = (0..copies).map(|j| if (j & branch).count_ones() % 2 == 0 { 1 } else { -1 }).collect();
    Ok(HeraldWeights { signs })
}

/// `(1/N) Σ_j f_j U_j`
pub fn heralded_operator(units: &[ModeMatrix], f: &HeraldWeights) -> Result<ModeMatrix> {
    if units.len() != f.len() {
        return Err(Error::LengthMismatch { expected: units.len(), found: f.len() });
    }
    let first = units.first().ok_or(Error::EmptyUnits)?;
    let mut acc = ModeMatrix::zeros(first.dim());
    let inv = 1.0 / units.len() as f64;
    for (u, &s) in units.iter().zip(&f.signs) {
        if u.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: u.dim() });
        }
        acc.add_scaled_assign(u, inv * s as f64);
    }
    Ok(acc)
}

/// Angle noise on the tree splitters, `θ = π/4 + δθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderNoise {
    pub noise: NoiseSpec,
    /// One physical splitter serves every rail of a copy pair, so all rails
    /// share the same `δθ`.
    pub correlated: bool,
}

impl EncoderNoise {
    pub fn exact() -> Self {
        Self { noise: NoiseSpec::none(), correlated: true }
    }

    /// Draws one deviation per splitter (and per rail unless correlated), in
    /// [`TreeLayout::sites`] order.
    pub fn sample<R: RngCore + ?Sized>(&self, layout: &TreeLayout, rails: usize, rng: &mut R) -> SplitterDeviations {
        let per_site = layout
            .sites()
            .map(|_| {
                if self.correlated {
                    let d = self.noise.sample(rng);
                    vec![d; rails]
                } else {
                    (0..rails).map(|_| self.noise.sample(rng)).collect()
                }
            })
            .collect();
        SplitterDeviations { per_site }
    }
}

/// Realised `δθ` for every splitter of a tree, indexed `[site][rail]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitterDeviations {
    pub per_site: Vec<Vec<f64>>,
}

impl SplitterDeviations {
    pub fn zeros(layout: &TreeLayout, rails: usize) -> Self {
        Self { per_site: vec![vec![0.0; rails]; layout.site_count()] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingConfig {
    /// `n`, giving `N = 2^n` copies.
    pub levels: u32,
    /// `M`, modes per copy (2 for a dual-rail qubit).
    pub payload_modes: usize,
    pub gate_noise: NoiseSpec,
    pub encoder_noise: Option<EncoderNoise>,
}

impl AveragingConfig {
    pub fn new(levels: u32, payload_modes: usize) -> Self {
        Self { levels, payload_modes, gate_noise: NoiseSpec::none(), encoder_noise: None }
    }

    pub fn copies(&self) -> usize {
        1 << self.levels
    }

    pub fn total_modes(&self) -> usize {
        self.copies() * self.payload_modes
    }

    pub fn layout(&self) -> TreeLayout {
        TreeLayout { levels: self.levels }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Encode,
    Decode,
}

/// One balanced splitter joining copies `upper < lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitterSite {
    pub stage: Stage,
    pub layer: u32,
    pub upper: usize,
    pub lower: usize,
}

/// Splitter positions of a `levels`-deep Hadamard network. Encoder layer `ℓ`
/// joins every copy `j` whose bit `N/2^{ℓ+1}` is clear with `j + N/2^{ℓ+1}`;
/// the decoder mirrors the encoder, so each stage is `H^{⊗n}` and herald
/// port `k` carries row `k`.
///
/// The concatenated tree (one splitter per sub-circuit) keeps only the sites
/// with `j` a multiple of `2·N/2^{ℓ+1}`. The extra encoder sites only ever
/// see vacuum and the extra decoder sites only mix error ports, so success
/// amplitudes are the same; completing the layers makes the herald branches
/// exactly the Hadamard rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLayout {
    pub levels: u32,
}

impl TreeLayout {
    fn layer_sites(&self, layer: u32, stage: Stage) -> impl Iterator<Item = SplitterSite> {
        let copies = 1usize << self.levels;
        let span = copies >> (layer + 1);
        (0..copies).filter(move |j| j & span == 0).map(move |base| SplitterSite { stage, layer, upper: base, lower: base + span })
    }

    /// Encoder layers first, top level first; then decoder layers, bottom
    /// level first.
    pub fn layers(&self) -> Vec<Vec<SplitterSite>> {
        let enc = (0..self.levels).map(|l| self.layer_sites(l, Stage::Encode).collect());
        let dec = (0..self.levels).rev().map(|l| self.layer_sites(l, Stage::Decode).collect());
        enc.chain(dec).collect()
    }

    pub fn sites(&self) -> impl Iterator<Item = SplitterSite> {
        self.layers().into_iter().flatten()
    }

    /// `2 · n · N/2`
    pub fn site_count(&self) -> usize {
        self.levels as usize * (1usize << self.levels)
    }
}

/// The assembled interferometer: encoder, one unit per copy, decoder.
#[derive(Debug, Clone)]
pub struct EncodedCircuit {
    config: AveragingConfig,
    matrix: ModeMatrix,
    units: Vec<ModeMatrix>,
    layers: Vec<Vec<SplitterSite>>,
}

fn layer_matrix(
    sites: &[SplitterSite],
    site_offset: usize,
    deviations: &SplitterDeviations,
    rails: usize,
    total: usize,
) -> Result<ModeMatrix> {
    let mut m = ModeMatrix::identity(total);
    for (k, site) in sites.iter().enumerate() {
        let devs = &deviations.per_site[site_offset + k];
        if devs.len() != rails {
            return Err(Error::LengthMismatch { expected: rails, found: devs.len() });
        }
        for (r, &d) in devs.iter().enumerate() {
            let b = ModeMatrix::splitter(FRAC_PI_4 + d);
            let placed = embed(&b, &[site.upper * rails + r, site.lower * rails + r], total)?;
            m = placed.matmul_unchecked(&m);
        }
    }
    Ok(m)
}

impl EncodedCircuit {
    /// Tree with perfectly balanced splitters.
    pub fn build(config: &AveragingConfig, units: &[ModeMatrix]) -> Result<Self> {
        let layout = config.layout();
        Self::build_with(config, units, &SplitterDeviations::zeros(&layout, config.payload_modes))
    }

    /// Tree with the given splitter deviations.
    pub fn build_with(config: &AveragingConfig, units: &[ModeMatrix], deviations: &SplitterDeviations) -> Result<Self> {
        let copies = config.copies();
        let rails = config.payload_modes;
        if units.len() != copies {
            return Err(Error::LengthMismatch { expected: copies, found: units.len() });
        }
        if let Some(u) = units.iter().find(|u| u.dim() != rails) {
            return Err(Error::DimensionMismatch { expected: rails, found: u.dim() });
        }
        let layout = config.layout();
        if deviations.per_site.len() != layout.site_count() {
            return Err(Error::LengthMismatch { expected: layout.site_count(), found: deviations.per_site.len() });
        }
        let total = config.total_modes();
        let layers = layout.layers();

        let mut middle = ModeMatrix::identity(total);
        for (j, u) in units.iter().enumerate() {
            let targets: Vec<usize> = (0..rails).map(|r| j * rails + r).collect();
            middle = embed(u, &targets, total)?.matmul_unchecked(&middle);
        }

        let half = config.levels as usize;
        let mut matrix = ModeMatrix::identity(total);
        let mut offset = 0;
        for (idx, layer) in layers.iter().enumerate() {
            if idx == half {
                matrix = middle.matmul_unchecked(&matrix);
            }
            let lm = layer_matrix(layer, offset, deviations, rails, total)?;
            matrix = lm.matmul_unchecked(&matrix);
            offset += layer.len();
        }
        if half == layers.len() {
            matrix = middle.matmul_unchecked(&matrix);
        }
        Ok(Self { config: *config, matrix, units: units.to_vec(), layers })
    }

    pub fn config(&self) -> &AveragingConfig {
        &self.config
    }

    pub fn matrix(&self) -> &ModeMatrix {
        &self.matrix
    }

    pub fn units(&self) -> &[ModeMatrix] {
        &self.units
    }

    pub fn layers(&self) -> &[Vec<SplitterSite>] {
        &self.layers
    }

    pub fn copy_modes(&self, copy: usize) -> Vec<usize> {
        let m = self.config.payload_modes;
        (copy * m..(copy + 1) * m).collect()
    }

    pub fn success_modes(&self) -> Vec<usize> {
        self.copy_modes(0)
    }

    pub fn error_modes(&self) -> Vec<usize> {
        (self.config.payload_modes..self.config.total_modes()).collect()
    }

    /// Payload-in to payload-out block: the post-selected operator.
    pub fn success_block(&self) -> Result<ModeMatrix> {
        let s = self.success_modes();
        self.matrix.submatrix(&s, &s)
    }

    /// Payload-in to copy-`branch`-out block.
    pub fn herald_block(&self, branch: usize) -> Result<ModeMatrix> {
        if branch >= self.config.copies() {
            return Err(Error::BranchOutOfRange { branch, levels: self.config.levels });
        }
        self.matrix.submatrix(&self.copy_modes(branch), &self.success_modes())
    }

    /// Splitters crossed by the path from the input port through each copy
    /// and back to the output port.
    pub fn path_splitter_counts(&self) -> Vec<usize> {
        let copies = self.config.copies();
        (0..copies)
            .map(|j| {
                self.layers
                    .iter()
                    .filter(|layer| {
                        layer.iter().any(|s| {
                            // the path sits on the copy sharing j's bits above this site's span
                            let span = s.lower - s.upper;
                            let mode = j & !(2 * span - 1);
                            s.upper == mode
                        })
                    })
                    .count()
            })
            .collect()
    }

    /// Splitter layers between input and output.
    pub fn optical_depth(&self) -> usize {
        self.layers.len()
    }

    /// Runs `input` (on the payload modes) through the circuit and
    /// post-selects vacuum on every error mode.
    pub fn run_postselected(&self, input: &PhotonicState) -> Result<PostSelection> {
        if input.modes() != self.config.payload_modes {
            return Err(Error::DimensionMismatch { expected: self.config.payload_modes, found: input.modes() });
        }
        let total = self.config.total_modes();
        let success = self.success_modes();
        let full = input.embed_modes(&success, total)?.evolve(&self.matrix)?;
        let (kept, norm_sq) = full.vacuum_project(&self.error_modes())?;
        let kept = kept.restrict(&success)?;
        if norm_sq <= HERALD_CERTAIN_TOL {
            return Ok(PostSelection::HeraldCertain);
        }
        match kept.normalized() {
            Some(state) => Ok(PostSelection::Conditional { state, success_probability: norm_sq }),
            None => Ok(PostSelection::HeraldCertain),
        }
    }
}

/// Success probabilities at or below this are rounding residue of an
/// exactly cancelling branch.
pub const HERALD_CERTAIN_TOL: f64 = 1e-24;

/// Result of a post-selected run.
#[derive(Debug, Clone, PartialEq)]
pub enum PostSelection {
    Conditional {
        state: PhotonicState,
        success_probability: f64,
    },
    /// The vacuum branch has zero amplitude; an error port always fires.
    HeraldCertain,
}

impl PostSelection {
    pub fn success_probability(&self) -> f64 {
        match self {
            PostSelection::Conditional { success_probability, .. } => *success_probability,
            PostSelection::HeraldCertain => 0.0,
        }
    }

    pub fn state(&self) -> Option<&PhotonicState> {
        match self {
            PostSelection::Conditional { state, .. } => Some(state),
            PostSelection::HeraldCertain => None,
        }
    }
}

/// `|⟨U_T ψ | conditional⟩|²`
pub fn fidelity_vs_target(conditional: &PhotonicState, target_gate: &ModeMatrix, input: &PhotonicState) -> Result<f64> {
    let target = input.evolve(target_gate)?;
    if target.modes() != conditional.modes() {
        return Err(Error::DimensionMismatch { expected: target.modes(), found: conditional.modes() });
    }
    Ok(target.inner(conditional).norm_sqr())
}

/// Fixed signed pattern in `[-1, 1]` used to spread one magnitude over all
/// splitter angles.
fn deviation_pattern(layout: &TreeLayout, rails: usize, correlated: bool) -> SplitterDeviations {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0e2c_0de5);
    let mut draw = || {
        let u: f64 = StandardUniform.sample(&mut rng);
        let v = 0.25 + 0.75 * u;
        if rng.next_u32() & 1 == 0 {
            v
        } else {
            -v
        }
    };
    let per_site =
        layout.sites().map(|_| if correlated { vec![draw(); rails] } else { (0..rails).map(|_| draw()).collect() }).collect();
    SplitterDeviations { per_site }
}

fn scaled(d: &SplitterDeviations, s: f64) -> SplitterDeviations {
    SplitterDeviations { per_site: d.per_site.iter().map(|r| r.iter().map(|x| x * s).collect()).collect() }
}

/// Frobenius distance between the post-selected operator of a tree with
/// exact gates and the target gate, for each encoder-noise magnitude.
pub fn encoder_error_scaling(levels: u32, gate: &GateParams, magnitudes: &[f64], correlated: bool) -> Result<Vec<(f64, f64)>> {
    let config = AveragingConfig::new(levels, 2);
    let target = gate.matrix();
    let units = vec![target.clone(); config.copies()];
    let pattern = deviation_pattern(&config.layout(), 2, correlated);
    magnitudes
        .iter()
        .map(|&m| {
            let c = EncodedCircuit::build_with(&config, &units, &scaled(&pattern, m))?;
            let dev = c.success_block()?.sub(&target)?.frobenius_norm();
            Ok((m, dev))
        })
        .collect()
}

/// Central-difference derivative norm of the post-selected operator with
/// respect to every splitter angle (one per site, or per site and rail).
pub fn encoder_first_derivatives(levels: u32, gate: &GateParams, correlated: bool, step: f64) -> Result<Vec<f64>> {
    let config = AveragingConfig::new(levels, 2);
    let units = vec![gate.matrix(); config.copies()];
    let layout = config.layout();
    let zero = SplitterDeviations::zeros(&layout, 2);
    let mut out = Vec::new();
    for site in 0..layout.site_count() {
        let rails: &[usize] = if correlated { &[0] } else { &[0, 1] };
        for &rail in rails {
            let bump = |h: f64| -> Result<ModeMatrix> {
                let mut d = zero.clone();
                if correlated {
                    d.per_site[site].iter_mut().for_each(|x| *x = h);
                } else {
                    d.per_site[site][rail] = h;
                }
                EncodedCircuit::build_with(&config, &units, &d)?.success_block()
            };
            let diff = bump(step)?.sub(&bump(-step)?)?;
            out.push(diff.frobenius_norm() / (2.0 * step));
        }
    }
    Ok(out)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Gaussian-random payload units around `target`, one per copy; used by
/// tests and examples that need realistic non-identical copies.
pub fn jittered_units<P: Parameterized, R: RngCore + ?Sized>(
    target: &P,
    copies: usize,
    spread: f64,
    rng: &mut R,
) -> Vec<ModeMatrix> {
    (0..copies)
        .map(|_| {
            let d: Vec<f64> = (0..P::COUNT)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    z * spread
                })
                .collect();
            target.perturbed(&d).matrix()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::gates::NamedGate;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn z_gate() -> ModeMatrix {
        ModeMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    #[test]
    fn averaged_operator_examples() {
        let u = NamedGate::H.params().matrix();
        let avg = averaged_operator(&[u.clone(), u.clone()]).unwrap();
        assert!(avg.max_abs_diff(&u).unwrap() < 1e-15);
        let avg = averaged_operator(&[ModeMatrix::identity(2), z_gate()]).unwrap();
        assert_eq!(avg, ModeMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(averaged_operator(&[]), Err(Error::EmptyUnits));
        assert!(averaged_operator(&[ModeMatrix::identity(2), ModeMatrix::identity(3)]).is_err());
    }

    #[test]
    fn heralded_operator_examples() {
        let f = herald_weights(1, 1).unwrap();
        let u = NamedGate::H.params().matrix();
        let h = heralded_operator(&[u.clone(), u], &f).unwrap();
        assert!(h.frobenius_norm() < 1e-15);
        let h = heralded_operator(&[ModeMatrix::identity(2), z_gate()], &f).unwrap();
        assert_eq!(h, ModeMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]));
        let short = herald_weights(2, 0).unwrap();
        assert!(heralded_operator(&[ModeMatrix::identity(2)], &short).is_err());
    }

    #[test]
    fn herald_weight_rows() {
        assert_eq!(herald_weights(1, 0).unwrap().signs(), &[1, 1]);
        assert_eq!(herald_weights(1, 1).unwrap().signs(), &[1, -1]);
        assert_eq!(herald_weights(2, 3).unwrap().signs(), &[1, -1, -1, 1]);
        assert!(herald_weights(2, 0).unwrap().is_success());
        for k in 1..8 {
            let f = herald_weights(3, k).unwrap();
            assert!(!f.is_success());
            assert_eq!(f.signs().iter().map(|&s| s as i32).sum::<i32>(), 0);
        }
        assert_eq!(herald_weights(2, 4), Err(Error::BranchOutOfRange { branch: 4, levels: 2 }));
    }

    #[test]
    fn level_zero_tree_is_the_unit() {
        let u = NamedGate::H.params().matrix();
        let c = EncodedCircuit::build(&AveragingConfig::new(0, 2), &[u.clone()]).unwrap();
        assert_eq!(c.matrix(), &u);
        assert!(c.error_modes().is_empty());
        assert_eq!(c.optical_depth(), 0);
    }

    #[test]
    fn identical_identity_units_never_herald() {
        let c = EncodedCircuit::build(&AveragingConfig::new(1, 2), &[ModeMatrix::identity(2), ModeMatrix::identity(2)]).unwrap();
        for input in [PhotonicState::basis(2, &[0]).unwrap(), PhotonicState::basis(2, &[1]).unwrap()] {
            let r = c.run_postselected(&input).unwrap();
            assert!((r.success_probability() - 1.0).abs() < 1e-12);
            assert!(c.herald_block(1).unwrap().frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn identity_and_z_branches() {
        let c = EncodedCircuit::build(&AveragingConfig::new(1, 2), &[ModeMatrix::identity(2), z_gate()]).unwrap();
        let plus = PhotonicState::single_photon(&[c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)]).unwrap();
        match c.run_postselected(&plus).unwrap() {
            PostSelection::Conditional { state, success_probability } => {
                assert!((success_probability - 0.5).abs() < 1e-12);
                assert!((state.amplitude(&[0]).norm() - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        // |V> is annihilated by (I + Z)/2
        let v = PhotonicState::basis(2, &[1]).unwrap();
        assert_eq!(c.run_postselected(&v).unwrap(), PostSelection::HeraldCertain);
    }

    #[test]
    fn depth_is_two_layers_per_level() {
        for levels in 0..=3 {
            let cfg = AveragingConfig::new(levels, 2);
            let units = vec![ModeMatrix::identity(2); cfg.copies()];
            let c = EncodedCircuit::build(&cfg, &units).unwrap();
            assert_eq!(c.optical_depth(), 2 * levels as usize);
            assert!(c.path_splitter_counts().iter().all(|&n| n == 2 * levels as usize));
            assert_eq!(c.layers().iter().map(Vec::len).sum::<usize>(), cfg.layout().site_count());
            assert!(c.matrix().is_unitary(1e-12));
        }
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let cfg = AveragingConfig::new(1, 2);
        assert!(EncodedCircuit::build(&cfg, &[ModeMatrix::identity(2)]).is_err());
        assert!(EncodedCircuit::build(&cfg, &[ModeMatrix::identity(3), ModeMatrix::identity(3)]).is_err());
        let c = EncodedCircuit::build(&cfg, &[ModeMatrix::identity(2), ModeMatrix::identity(2)]).unwrap();
        assert!(c.run_postselected(&PhotonicState::basis(4, &[0]).unwrap()).is_err());
        assert!(c.herald_block(2).is_err());
    }

    #[test]
    fn encoder_noise_zero_deviation() {
        let h = NamedGate::H.params();
        let pts = encoder_error_scaling(1, &h, &[0.0], true).unwrap();
        assert!(pts[0].1 < 1e-15);
    }

    #[test]
    fn slope_fit() {
        let pts = [(1e-3, 2e-6), (1e-4, 2e-8), (1e-5, 2e-10)];
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-10);
        assert!(loglog_slope(&[(1.0, 1.0)]).is_none());
    }
}
