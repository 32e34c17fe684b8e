//! Gate constructors: the five-angle single-qubit gate, the Type-II fusion
//! network and the general four-mode interferometer.
//!
//! Every constructor is a [`Parameterized`] family so noise can be added to
//! each physical angle uniformly.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::Float;

use crate::matrix::{embed, ModeMatrix};
use crate::{Error, Result};

/// A gate family described by a flat list of physical angles.
pub trait Parameterized: Clone {
    /// Number of angles in the family.
    const COUNT: usize;
    /// Noisy angles crossed by every input-output path.
    const PATH_DEPTH: u32;

    fn values(&self) -> Vec<f64>;
    fn from_values(values: &[f64]) -> Self;
    fn matrix(&self) -> ModeMatrix;

    /// `self` with `deltas` added angle by angle.
    fn perturbed(&self, deltas: &[f64]) -> Self {
        assert_eq!(deltas.len(), Self::COUNT, "one delta per angle");
        let v: Vec<f64> = self.values().iter().zip(deltas).map(|(a, d)| a + d).collect();
        Self::from_values(&v)
    }
}

/// Angles of the dual-rail single-qubit gate
/// `[[e^{iφ1} e^{iχ1} sin θ, e^{iφ2} e^{iχ1} cos θ], [e^{iφ1} e^{iχ2} cos θ, -e^{iφ2} e^{iχ2} sin θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub chi1: f64,
    pub chi2: f64,
}

impl GateParams {
    pub const fn new(theta: f64, phi1: f64, phi2: f64, chi1: f64, chi2: f64) -> Self {
        Self { theta, phi1, phi2, chi1, chi2 }
    }
}

pub fn single_qubit_matrix(p: &GateParams) -> ModeMatrix {
    let (s, c) = p.theta.sin_cos();
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let mut m = ModeMatrix::zeros(2);
    m.set(0, 0, e(p.phi1 + p.chi1) * s);
    m.set(0, 1, e(p.phi2 + p.chi1) * c);
    m.set(1, 0, e(p.phi1 + p.chi2) * c);
    m.set(1, 1, -e(p.phi2 + p.chi2) * s);
    m
}

impl Parameterized for GateParams {
    const COUNT: usize = 5;
    const PATH_DEPTH: u32 = 3;

    fn values(&self) -> Vec<f64> {
        alloc::vec![self.theta, self.phi1, self.phi2, self.chi1, self.chi2]
    }

    fn from_values(v: &[f64]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4])
    }

    fn matrix(&self) -> ModeMatrix {
        single_qubit_matrix(self)
    }
}

/// Named single-qubit gates with their tabulated angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedGate {
    I,
    X,
    Y,
    /// Phase gate with `χ2 = α`.
    ZAlpha(f64),
    H,
}

impl NamedGate {
    pub fn params(self) -> GateParams {
        match self {
            NamedGate::I => GateParams::new(FRAC_PI_2, 0.0, 0.0, 0.0, PI),
            NamedGate::X => GateParams::new(0.0, 0.0, 0.0, 0.0, 0.0),
            NamedGate::Y => GateParams::new(0.0, FRAC_PI_2, 0.0, -FRAC_PI_2, 0.0),
            NamedGate::ZAlpha(alpha) => GateParams::new(FRAC_PI_2, 0.0, 0.0, 0.0, alpha),
            NamedGate::H => GateParams::new(FRAC_PI_4, 0.0, 0.0, 0.0, 0.0),
        }
    }

    pub fn all_fixed() -> [NamedGate; 4] {
        [NamedGate::I, NamedGate::X, NamedGate::Y, NamedGate::H]
    }
}

/// Accepts `I`, `X`, `Y`, `Z` (α = π), `H` and `Z_alpha(<radians>)`.
impl FromStr for NamedGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "I" | "i" => return Ok(NamedGate::I),
            "X" | "x" => return Ok(NamedGate::X),
            "Y" | "y" => return Ok(NamedGate::Y),
            "Z" | "z" => return Ok(NamedGate::ZAlpha(PI)),
            "H" | "h" => return Ok(NamedGate::H),
            _ => {}
        }
        let inner = t.strip_prefix("Z_alpha(").or_else(|| t.strip_prefix("Z(")).and_then(|r| r.strip_suffix(')'));
        match inner.map(|x| x.trim().parse::<f64>()) {
            Some(Ok(alpha)) if alpha.is_finite() => Ok(NamedGate::ZAlpha(alpha)),
            _ => Err(Error::UnknownGate(t.to_string())),
        }
    }
}

/// Looks up the tabulated angles for a gate name.
pub fn named_gate(name: &str) -> Result<GateParams> {
    name.parse::<NamedGate>().map(NamedGate::params)
}

/// Splitter angles of the Type-II fusion network: `θ1, θ2` before the swap of
/// modes 2 and 4, `θ3, θ4` after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionParams {
    pub theta: [f64; 4],
}

impl FusionParams {
    /// All splitters balanced.
    pub const IDEAL: FusionParams = FusionParams { theta: [FRAC_PI_4; 4] };
}

impl Default for FusionParams {
    fn default() -> Self {
        Self::IDEAL
    }
}

fn splitter_pair(theta_a: f64, theta_b: f64, pairs: [(usize, usize); 2]) -> ModeMatrix {
    let a = embed(&ModeMatrix::splitter(theta_a), &[pairs[0].0, pairs[0].1], 4).expect("fixed layout");
    let b = embed(&ModeMatrix::splitter(theta_b), &[pairs[1].0, pairs[1].1], 4).expect("fixed layout");
    a.matmul_unchecked(&b)
}

pub fn fusion_type2_matrix(p: &FusionParams) -> ModeMatrix {
    let [t1, t2, t3, t4] = p.theta;
    let first = splitter_pair(t1, t2, [(0, 1), (2, 3)]);
    let swap = ModeMatrix::permutation(&[0, 3, 2, 1]).expect("fixed layout");
    let last = splitter_pair(t3, t4, [(0, 1), (2, 3)]);
    last.matmul_unchecked(&swap).matmul_unchecked(&first)
}

impl Parameterized for FusionParams {
    const COUNT: usize = 4;
    const PATH_DEPTH: u32 = 2;

    fn values(&self) -> Vec<f64> {
        self.theta.to_vec()
    }

    fn from_values(v: &[f64]) -> Self {
        Self { theta: [v[0], v[1], v[2], v[3]] }
    }

    fn matrix(&self) -> ModeMatrix {
        fusion_type2_matrix(self)
    }
}

/// Mode pairs coupled by the splitters of each column of the four-mode
/// interferometer (zero-based modes).
pub const FOUR_MODE_COLUMNS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 1), (2, 3)]];

/// General four-mode interferometer: three columns, each a phase on every
/// mode followed by two splitters covering all four modes (pairs in
/// [`FOUR_MODE_COLUMNS`]). Every path crosses three phases and three
/// splitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourModeParams {
    pub phases: [[f64; 4]; 3],
    pub mixers: [[f64; 2]; 3],
}

impl FourModeParams {
    /// Settings that reproduce the Type-II fusion network: the middle column
    /// acts as a swap of modes 2 and 4 (one-based).
    pub fn type2_compatible(f: &FusionParams) -> Self {
        let [t1, t2, t3, t4] = f.theta;
        Self { phases: [[0.0; 4], [0.0, 0.0, PI, 0.0], [0.0; 4]], mixers: [[t1, t2], [FRAC_PI_2, 0.0], [t3, t4]] }
    }
}

impl Default for FourModeParams {
    fn default() -> Self {
        Self::type2_compatible(&FusionParams::IDEAL)
    }
}

pub fn four_mode_matrix(p: &FourModeParams) -> ModeMatrix {
    let mut total = ModeMatrix::identity(4);
    for (col, pairs) in FOUR_MODE_COLUMNS.iter().enumerate() {
        let phases = ModeMatrix::phases(&p.phases[col]);
        let mix = splitter_pair(p.mixers[col][0], p.mixers[col][1], *pairs);
        total = mix.matmul_unchecked(&phases).matmul_unchecked(&total);
    }
    total
}

impl Parameterized for FourModeParams {
    const COUNT: usize = 18;
    const PATH_DEPTH: u32 = 6;

    fn values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(Self::COUNT);
        for col in 0..3 {
            v.extend_from_slice(&self.phases[col]);
            v.extend_from_slice(&self.mixers[col]);
        }
        v
    }

    fn from_values(v: &[f64]) -> Self {
        let mut p = Self { phases: [[0.0; 4]; 3], mixers: [[0.0; 2]; 3] };
        for col in 0..3 {
            let base = col * 6;
            p.phases[col].copy_from_slice(&v[base..base + 4]);
            p.mixers[col].copy_from_slice(&v[base + 4..base + 6]);
        }
        p
    }

    fn matrix(&self) -> ModeMatrix {
        four_mode_matrix(self)
    }
}

/// Per-path depth `d` and per-angle variance `ν` of a noisy circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitNoiseProfile {
    pub depth: u32,
    pub variance: f64,
}

impl CircuitNoiseProfile {
    pub fn new(depth: u32, variance: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter { name: "path depth", value: 0.0 });
        }
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InvalidParameter { name: "variance", value: variance });
        }
        Ok(Self { depth, variance })
    }

    pub fn for_family<P: Parameterized>(variance: f64) -> Result<Self> {
        Self::new(P::PATH_DEPTH, variance)
    }

    /// `V = d·ν`
    pub fn characteristic(&self) -> f64 {
        self.depth as f64 * self.variance
    }
}
