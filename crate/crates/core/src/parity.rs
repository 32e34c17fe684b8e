//! Parity-code loss recovery with heralded gate errors.
//!
//! A logical qubit is held in `q` redundant copies of an `n`-qubit parity
//! block, `α ⊗^q |0⟩^{(n)} + β ⊗^q |1⟩^{(n)}`, where `|0⟩^{(n)}` and
//! `|1⟩^{(n)}` are the even- and odd-parity superpositions in the `H/V`
//! basis. Physical qubit `i` of copy `c` has index `c·n + i`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use rand_core::RngCore;
use rand_distr::{Distribution, StandardUniform};

use crate::analytic::{ps_first_order, Copies};
use crate::matrix::ModeMatrix;
use crate::{Error, Result};

/// Largest `n·q` handled by exhaustive enumeration and the state-vector
/// verifier.
pub const MAX_ENUMERATED_QUBITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityCode {
    pub n: usize,
    pub q: usize,
}

impl ParityCode {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter { name: "parity block size n", value: 0.0 });
        }
        if q == 0 {
            return Err(Error::InvalidParameter { name: "redundancy q", value: 0.0 });
        }
        Ok(Self { n, q })
    }

    pub fn physical_qubits(&self) -> usize {
        self.n * self.q
    }
}

/// `α|0⟩_L + β|1⟩_L`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl LogicalState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter { name: "logical state norm", value: norm });
        }
        Ok(Self { alpha, beta })
    }
}

/// One flag per physical qubit; `true` means a photon reached an error port.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeraldPattern {
    flags: Vec<bool>,
}

impl HeraldPattern {
    pub fn new(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    pub fn clear(qubits: usize) -> Self {
        Self { flags: vec![false; qubits] }
    }

    /// Bit `i` of `mask` is the flag of qubit `i`.
    pub fn from_mask(mask: u64, qubits: usize) -> Self {
        Self { flags: (0..qubits).map(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn heralds(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    fn copy_flags(&self, code: &ParityCode, copy: usize) -> &[bool] {
        &self.flags[copy * code.n..(copy + 1) * code.n]
    }

    fn check(&self, code: &ParityCode) -> Result<()> {
        if self.flags.len() != code.physical_qubits() {
            return Err(Error::LengthMismatch { expected: code.physical_qubits(), found: self.flags.len() });
        }
        Ok(())
    }
}

/// Recovery is possible when at least one copy is clean and every heralded
/// copy keeps at least one unheralded qubit.
pub fn success_criteria(pattern: &HeraldPattern, code: &ParityCode) -> Result<bool> {
    pattern.check(code)?;
    let mut errored = 0;
    for c in 0..code.q {
        let f = pattern.copy_flags(code, c);
        if f.iter().any(|&x| x) {
            errored += 1;
            if f.iter().all(|&x| x) {
                return Ok(false);
            }
        }
    }
    Ok(errored < code.q)
}

/// Independent per-qubit herald probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossModel {
    p: f64,
}

impl LossModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter { name: "herald probability", value: p });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `(c + s)^q − s^q` with `c = (1−p)^n` the clean-copy probability and
/// `s = 1 − c − p^n` the heralded-with-survivor probability.
pub fn logical_success_prob(code: &ParityCode, loss: &LossModel) -> f64 {
    let p = loss.p;
    let n = code.n as i32;
    let c = (1.0 - p).powi(n);
    let s = (1.0 - c - p.powi(n)).max(0.0);
    let q = code.q as i32;
    (c + s).powi(q) - s.powi(q)
}

/// Sum of pattern weights `p^h (1−p)^{nq−h}` over all recoverable patterns.
pub fn enumerated_success_prob(code: &ParityCode, loss: &LossModel) -> Result<f64> {
    let m = code.physical_qubits();
    if m > MAX_ENUMERATED_QUBITS {
        return Err(Error::EnumerationTooLarge(m));
    }
    let mut total = 0.0;
    for mask in 0..1u64 << m {
        let pattern = HeraldPattern::from_mask(mask, m);
        if success_criteria(&pattern, code)? {
            let h = mask.count_ones() as i32;
            total += loss.p.powi(h) * (1.0 - loss.p).powi(m as i32 - h);
        }
    }
    Ok(total)
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(Error::EnumerationTooLarge(exp))?;
    }
    Ok(acc)
}

/// Numerator of the closed form over `D^{nq}` for `p = a/D`, in integers.
pub fn closed_form_numerator(code: &ParityCode, a: u64, d: u64) -> Result<u128> {
    if d == 0 || a > d {
        return Err(Error::InvalidParameter { name: "rational p", value: a as f64 / d as f64 });
    }
    let (a, d) = (a as u128, d as u128);
    let dn = checked_pow(d, code.n)?;
    let an = checked_pow(a, code.n)?;
    let cn = checked_pow(d - a, code.n)?;
    let t = dn - an;
    let s = dn - cn - an;
    Ok(checked_pow(t, code.q)? - checked_pow(s, code.q)?)
}

/// Numerator of the enumerated success probability over `D^{nq}` for
/// `p = a/D`: the sum of `a^h (D−a)^{nq−h}` over recoverable patterns.
pub fn enumerated_numerator(code: &ParityCode, a: u64, d: u64) -> Result<u128> {
    let m = code.physical_qubits();
    if m > MAX_ENUMERATED_QUBITS {
        return Err(Error::EnumerationTooLarge(m));
    }
    if d == 0 || a > d {
        return Err(Error::InvalidParameter { name: "rational p", value: a as f64 / d as f64 });
    }
    let weights: Vec<u128> =
        (0..=m).map(|h| Ok(checked_pow(a as u128, h)? * checked_pow((d - a) as u128, m - h)?)).collect::<Result<_>>()?;
    let mut total: u128 = 0;
    for mask in 0..1u64 << m {
        if success_criteria(&HeraldPattern::from_mask(mask, m), code)? {
            total += weights[mask.count_ones() as usize];
        }
    }
    Ok(total)
}

/// Fraction of `samples` random patterns that are recoverable.
pub fn sampled_success_prob<R: RngCore + ?Sized>(code: &ParityCode, loss: &LossModel, samples: u64, rng: &mut R) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter { name: "samples", value: 0.0 });
    }
    let m = code.physical_qubits();
    let mut ok = 0u64;
    let mut flags = vec![false; m];
    for _ in 0..samples {
        for f in flags.iter_mut() {
            let u: f64 = StandardUniform.sample(rng);
            *f = u < loss.p;
        }
        let pattern = HeraldPattern { flags: core::mem::take(&mut flags) };
        if success_criteria(&pattern, code)? {
            ok += 1;
        }
        flags = pattern.flags;
    }
    Ok(ok as f64 / samples as f64)
}

/// Herald probability of one physical qubit behind an averaged gate:
/// `1 − P_s` with `P_s = 1 − dν + dν/N`.
pub fn herald_prob_from_ua(nu: f64, n: Copies, depth: u32) -> Result<f64> {
    Ok(1.0 - ps_first_order(depth as f64 * nu, n)?)
}

/// Amplitudes written into the error ports when one physical qubit heralds:
/// `|H⟩ → δH |ε⟩`, `|V⟩ → −δV |ε⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldAmplitudes {
    pub dh: Complex64,
    pub dv: Complex64,
}

impl HeraldAmplitudes {
    /// Linear functional on `(H, V)` amplitudes.
    fn functional(&self) -> [Complex64; 2] {
        [self.dh, -self.dv]
    }
}

/// Output of one physical qubit after an averaged gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelOutput {
    /// No herald: the qubit carries `u_T |ψ⟩`.
    Qubit([Complex64; 2]),
    /// Herald: the qubit is gone and leaves this amplitude behind.
    Heralded(Complex64),
}

/// Per-qubit channel in the `N → ∞` limit, unnormalised.
pub fn ua_qubit_channel(
    herald: bool,
    u_target: &ModeMatrix,
    amps: &HeraldAmplitudes,
    state: [Complex64; 2],
) -> Result<ChannelOutput> {
    if u_target.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: u_target.dim() });
    }
    if herald {
        let f = amps.functional();
        Ok(ChannelOutput::Heralded(f[0] * state[0] + f[1] * state[1]))
    } else {
        let out = u_target.apply_to(&state)?;
        Ok(ChannelOutput::Qubit([out[0], out[1]]))
    }
}

/// Overlaps of the heralded qubits of one copy with `|0⟩^{(J)}` and
/// `|1⟩^{(J)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldedBranchAmplitudes {
    pub delta_theta: Complex64,
    pub delta_phi: Complex64,
}

impl HeraldedBranchAmplitudes {
    /// Computes `δΘ` and `δΦ` from the herald amplitudes of the `J` heralded
    /// qubits of one copy.
    pub fn from_heralds(amps: &[HeraldAmplitudes]) -> Self {
        let j = amps.len();
        let scale = 2f64.powf((1.0 - j as f64) / 2.0);
        let mut even = Complex64::zero();
        let mut odd = Complex64::zero();
        for x in 0..1usize << j {
            let term: Complex64 = amps.iter().enumerate().map(|(i, a)| a.functional()[x >> i & 1]).product();
            if x.count_ones() % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
        Self { delta_theta: even * scale, delta_phi: odd * scale }
    }

    /// Signs of `δΘ` and `δΦ` after dividing out their moduli. Defined when
    /// both are real and non-zero.
    pub fn renormalized(&self) -> Option<(f64, f64)> {
        let sign = |z: Complex64| {
            let r = z.norm();
            if r == 0.0 || z.im.abs() > 1e-12 * r {
                None
            } else {
                Some(z.re.signum())
            }
        };
        Some((sign(self.delta_theta)?, sign(self.delta_phi)?))
    }
}

/// Result of measuring a survivor in the `u_T |±⟩` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Match {
        max_deviation: f64,
    },
    Mismatch {
        max_deviation: f64,
    },
    /// The requested outcome has zero probability on this copy.
    ImpossibleOutcome {
        copy: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub verdict: Verdict,
    /// Errored copies in processing order.
    pub errored_copies: Vec<usize>,
    pub branches: Vec<HeraldedBranchAmplitudes>,
    pub minus_outcomes: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Match { .. })
    }
}

/// Dense register; bit `k` of an index is the value of `labels[k]`.
struct Register {
    labels: Vec<usize>,
    amps: Vec<Complex64>,
}

impl Register {
    fn position(&self, qubit: usize) -> usize {
        self.labels.iter().position(|&l| l == qubit).expect("qubit still present")
    }

    fn apply(&mut self, qubit: usize, m: &ModeMatrix) {
        let bit = 1usize << self.position(qubit);
        for x in 0..self.amps.len() {
            if x & bit == 0 {
                let (a0, a1) = (self.amps[x], self.amps[x | bit]);
                self.amps[x] = m.get(0, 0) * a0 + m.get(0, 1) * a1;
                self.amps[x | bit] = m.get(1, 0) * a0 + m.get(1, 1) * a1;
            }
        }
    }

    /// Contracts `qubit` with the functional `f` and drops it.
    fn contract(&mut self, qubit: usize, f: [Complex64; 2]) {
        let t = self.position(qubit);
        let low_mask = (1usize << t) - 1;
        let amps = (0..self.amps.len() / 2)
            .map(|y| {
                let x0 = (y & low_mask) | ((y >> t) << (t + 1));
                f[0] * self.amps[x0] + f[1] * self.amps[x0 | 1 << t]
            })
            .collect();
        self.amps = amps;
        self.labels.remove(t);
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Amplitude of the `n`-bit block `bits` in `|0⟩^{(n)}` (even) or
/// `|1⟩^{(n)}` (odd).
fn block_amplitude(bits: usize, n: usize, logical_one: bool) -> f64 {
    if (bits.count_ones() % 2 == 1) == logical_one {
        2f64.powf((1.0 - n as f64) / 2.0)
    } else {
        0.0
    }
}

/// Register over `labels` holding `α ⊗_{copies}|0⟩^{(n)} + sign·β ⊗|1⟩^{(n)}`
/// on the qubits of `copies` and `|s_c⟩` on every other listed qubit.
fn product_state(
    code: &ParityCode,
    labels: &[usize],
    copies: &[usize],
    logical: &LogicalState,
    sign: f64,
    survivor_sign: &[f64],
) -> Register {
    let amps = (0..1usize << labels.len())
        .map(|x| {
            let mut zero = logical.alpha;
            let mut one = logical.beta * sign;
            let mut rest = 1.0;
            for &c in copies {
                let mut bits = 0;
                for i in 0..code.n {
                    let k = labels.iter().position(|&l| l == c * code.n + i).expect("clean copy present");
                    bits |= (x >> k & 1) << i;
                }
                zero *= block_amplitude(bits, code.n, false);
                one *= block_amplitude(bits, code.n, true);
            }
            for (k, &l) in labels.iter().enumerate() {
                let c = l / code.n;
                if !copies.contains(&c) {
                    let b = x >> k & 1;
                    rest *= if b == 0 { 1.0 } else { survivor_sign[c] } / 2f64.sqrt();
                }
            }
            (zero + one) * rest
        })
        .collect();
    Register { labels: labels.to_vec(), amps }
}

/// Builds the full encoded state, applies the per-qubit channels for
/// `pattern`, measures the first survivor of each errored copy (ascending
/// copy order) with the given outcome, and compares the renormalised result
/// with `(⊗ u_T|±⟩) ⊗ U_T(α ⊗|0⟩^{(n)} ± β ⊗|1⟩^{(n)})` up to a global phase.
///
/// `herald_amps` holds one entry per heralded qubit in qubit order and
/// `outcomes` one entry per errored copy.
pub fn statevector_verify(
    code: &ParityCode,
    pattern: &HeraldPattern,
    u_target: &ModeMatrix,
    logical: &LogicalState,
    herald_amps: &[HeraldAmplitudes],
    outcomes: &[Outcome],
) -> Result<VerifyReport> {
    pattern.check(code)?;
    let m = code.physical_qubits();
    if m > MAX_ENUMERATED_QUBITS {
        return Err(Error::EnumerationTooLarge(m));
    }
    if u_target.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: u_target.dim() });
    }
    if !success_criteria(pattern, code)? {
        return Err(Error::UnrecoverablePattern("needs a clean copy and a survivor in every heralded copy"));
    }
    if herald_amps.len() != pattern.heralds() {
        return Err(Error::LengthMismatch { expected: pattern.heralds(), found: herald_amps.len() });
    }
    let errored: Vec<usize> = (0..code.q).filter(|&c| pattern.copy_flags(code, c).iter().any(|&f| f)).collect();
    if outcomes.len() != errored.len() {
        return Err(Error::LengthMismatch { expected: errored.len(), found: outcomes.len() });
    }

    let all: Vec<usize> = (0..m).collect();
    let clean_all: Vec<usize> = (0..code.q).collect();
    let mut reg = product_state(code, &all, &clean_all, logical, 1.0, &[]);

    let mut amp_iter = herald_amps.iter();
    let mut branches = Vec::with_capacity(errored.len());
    for c in 0..code.q {
        let flags = pattern.copy_flags(code, c);
        let mut copy_amps = Vec::new();
        for (i, &f) in flags.iter().enumerate() {
            let qubit = c * code.n + i;
            if f {
                let a = *amp_iter.next().expect("length checked");
                reg.contract(qubit, a.functional());
                copy_amps.push(a);
            } else {
                reg.apply(qubit, u_target);
            }
        }
        if !copy_amps.is_empty() {
            branches.push(HeraldedBranchAmplitudes::from_heralds(&copy_amps));
        }
    }

    let scale = reg.norm_sqr();
    let mut minus = 0;
    let mut survivor_sign = vec![1.0; code.q];
    for (&c, &outcome) in errored.iter().zip(outcomes) {
        let qubit = (0..code.n).map(|i| c * code.n + i).find(|&t| !pattern.flags[t]).expect("criteria checked");
        let s = outcome.sign();
        let basis = u_target.apply_to(&[Complex64::new(1.0, 0.0), Complex64::new(s, 0.0)])?;
        let f = [basis[0].conj() / 2f64.sqrt(), basis[1].conj() / 2f64.sqrt()];
        reg.contract(qubit, f);
        if reg.norm_sqr() <= 1e-24 * scale.max(1e-300) {
            return Ok(VerifyReport {
                verdict: Verdict::ImpossibleOutcome { copy: c },
                errored_copies: errored,
                branches,
                minus_outcomes: minus,
            });
        }
        if outcome == Outcome::Minus {
            minus += 1;
        }
        survivor_sign[c] = s;
    }

    let clean: Vec<usize> = (0..code.q).filter(|c| !errored.contains(c)).collect();
    let sign = if minus % 2 == 0 { 1.0 } else { -1.0 };
    let mut expected = product_state(code, &reg.labels, &clean, logical, sign, &survivor_sign);
    for &l in &reg.labels.clone() {
        expected.apply(l, u_target);
    }

    let norm = reg.norm_sqr().sqrt();
    let got: Vec<Complex64> = reg.amps.iter().map(|z| z / norm).collect();
    let overlap: Complex64 = expected.amps.iter().zip(&got).map(|(e, g)| e.conj() * g).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    let max_deviation = expected.amps.iter().zip(&got).map(|(e, g)| (g - e * phase).norm()).fold(0.0, f64::max);
    let verdict = if max_deviation <= 1e-10 { Verdict::Match { max_deviation } } else { Verdict::Mismatch { max_deviation } };
    Ok(VerifyReport { verdict, errored_copies: errored, branches, minus_outcomes: minus })
}
