//! Sparse few-photon Fock states.
//!
//! Basis states are occupation lists `|n_0, n_1, ...⟩` normalised in the usual
//! bosonic way, `|n⟩ = Π_k (a†_k)^{n_k} / sqrt(n_k!) |vac⟩`. Only photon
//! numbers 1 and 2 are supported.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::matrix::ModeMatrix;
use crate::{Error, Result};

/// Photon count per mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockOccupation {
    counts: Vec<u8>,
}

impl FockOccupation {
    pub fn new(counts: Vec<u8>) -> Self {
        Self { counts }
    }

    /// Occupation with one photon in each listed mode (repeats stack).
    pub fn from_photons(modes: usize, photons: &[usize]) -> Result<Self> {
        let mut counts = vec![0u8; modes];
        for &p in photons {
            if p >= modes {
                return Err(Error::ModeOutOfRange { index: p, modes });
            }
            counts[p] += 1;
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn photon_number(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Mode index of each photon, ascending.
    pub fn photon_modes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.photon_number());
        for (mode, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(mode);
            }
        }
        out
    }

    /// `sqrt(Π n_k!)`
    fn bosonic_factor(&self) -> f64 {
        let mut f = 1.0;
        for &c in &self.counts {
            for k in 2..=c {
                f *= k as f64;
            }
        }
        f.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    modes: usize,
    photon_number: usize,
    amplitudes: BTreeMap<FockOccupation, Complex64>,
}

fn check_photon_number(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedPhotonNumber(n))
    }
}

impl PhotonicState {
    /// Builds a state from `(occupation, amplitude)` terms; repeated
    /// occupations add up.
    pub fn from_terms<I>(modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockOccupation, Complex64)>,
    {
        let mut amplitudes = BTreeMap::new();
        let mut photon_number = None;
        for (occ, amp) in terms {
            if occ.modes() != modes {
                return Err(Error::DimensionMismatch { expected: modes, found: occ.modes() });
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::InvalidParameter { name: "amplitude", value: amp.re + amp.im });
            }
            let n = occ.photon_number();
            match photon_number {
                None => {
                    check_photon_number(n)?;
                    photon_number = Some(n);
                }
                Some(expected) if expected != n => return Err(Error::MixedPhotonNumber { expected, found: n }),
                _ => {}
            }
            *amplitudes.entry(occ).or_insert_with(Complex64::zero) += amp;
        }
        let photon_number = photon_number.ok_or(Error::UnsupportedPhotonNumber(0))?;
        Ok(Self { modes, photon_number, amplitudes })
    }

    /// A single basis state with photons in the listed modes.
    pub fn basis(modes: usize, photons: &[usize]) -> Result<Self> {
        let occ = FockOccupation::from_photons(modes, photons)?;
        Self::from_terms(modes, [(occ, Complex64::new(1.0, 0.0))])
    }

    /// One photon spread over the modes with the given amplitudes.
    pub fn single_photon(amplitudes: &[Complex64]) -> Result<Self> {
        let modes = amplitudes.len();
        let terms = amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, &a)| (FockOccupation::from_photons(modes, &[k]).expect("index in range"), a));
        let state = Self::from_terms(modes, terms);
        match state {
            Err(Error::UnsupportedPhotonNumber(0)) => Ok(Self { modes, photon_number: 1, amplitudes: BTreeMap::new() }),
            other => other,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photon_number(&self) -> usize {
        self.photon_number
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockOccupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, photons: &[usize]) -> Complex64 {
        FockOccupation::from_photons(self.modes, photons)
            .ok()
            .and_then(|occ| self.amplitudes.get(&occ).copied())
            .unwrap_or_else(Complex64::zero)
    }

    /// Dense amplitudes of a one-photon state, indexed by mode.
    pub fn single_photon_amplitudes(&self) -> Result<Vec<Complex64>> {
        if self.photon_number != 1 {
            return Err(Error::UnsupportedPhotonNumber(self.photon_number));
        }
        let mut out = vec![Complex64::zero(); self.modes];
        for (occ, amp) in &self.amplitudes {
            out[occ.photon_modes()[0]] = *amp;
        }
        Ok(out)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Rescaled to unit norm; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return None;
        }
        let inv = 1.0 / n.sqrt();
        let mut out = self.clone();
        out.amplitudes.values_mut().for_each(|a| *a *= inv);
        Some(out)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        let (small, large, conj_small) = if self.len() <= other.len() { (self, other, true) } else { (other, self, false) };
        let mut acc = Complex64::zero();
        for (occ, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(occ) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        acc
    }

    /// Keeps the terms with no photon in any of `error_modes` and returns the
    /// kept (unnormalised) state together with its squared norm.
    pub fn vacuum_project(&self, error_modes: &[usize]) -> Result<(Self, f64)> {
        for &m in error_modes {
            if m >= self.modes {
                return Err(Error::ModeOutOfRange { index: m, modes: self.modes });
            }
        }
        let amplitudes: BTreeMap<_, _> = self
            .amplitudes
            .iter()
            .filter(|(occ, _)| error_modes.iter().all(|&m| occ.counts[m] == 0))
            .map(|(o, a)| (o.clone(), *a))
            .collect();
        let projected = Self { modes: self.modes, photon_number: self.photon_number, amplitudes };
        let norm = projected.norm_sqr();
        Ok((projected, norm))
    }

    /// Drops every mode not in `keep`; the dropped modes must be empty.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        for &k in keep {
            if k >= self.modes {
                return Err(Error::ModeOutOfRange { index: k, modes: self.modes });
            }
        }
        let mut amplitudes = BTreeMap::new();
        for (occ, amp) in &self.amplitudes {
            let counts: Vec<u8> = keep.iter().map(|&k| occ.counts[k]).collect();
            let kept: usize = counts.iter().map(|&c| c as usize).sum();
            if kept != self.photon_number {
                return Err(Error::MixedPhotonNumber { expected: self.photon_number, found: kept });
            }
            *amplitudes.entry(FockOccupation::new(counts)).or_insert_with(Complex64::zero) += amp;
        }
        Ok(Self { modes: keep.len(), photon_number: self.photon_number, amplitudes })
    }

    /// Places this state on `targets` of a larger `total`-mode register.
    pub fn embed_modes(&self, targets: &[usize], total: usize) -> Result<Self> {
        if targets.len() != self.modes {
            return Err(Error::LengthMismatch { expected: self.modes, found: targets.len() });
        }
        let mut used = vec![false; total];
        for &t in targets {
            if t >= total {
                return Err(Error::ModeOutOfRange { index: t, modes: total });
            }
            if core::mem::replace(&mut used[t], true) {
                return Err(Error::DuplicateMode(t));
            }
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(occ, amp)| {
                let mut counts = vec![0u8; total];
                for (local, &c) in occ.counts.iter().enumerate() {
                    counts[targets[local]] = c;
                }
                (FockOccupation::new(counts), *amp)
            })
            .collect();
        Ok(Self { modes: total, photon_number: self.photon_number, amplitudes })
    }

    /// Evolves the state under `m`, dispatching on photon number.
    pub fn evolve(&self, m: &ModeMatrix) -> Result<Self> {
        match self.photon_number {
            1 => apply_single_photon(m, self),
            2 => apply_two_photon(m, self),
            n => Err(Error::UnsupportedPhotonNumber(n)),
        }
    }
}

/// One-photon evolution: amplitude on mode `i` becomes `Σ_k m[i,k] in[k]`.
pub fn apply_single_photon(m: &ModeMatrix, s: &PhotonicState) -> Result<PhotonicState> {
    if s.photon_number != 1 {
        return Err(Error::UnsupportedPhotonNumber(s.photon_number));
    }
    let dense = s.single_photon_amplitudes()?;
    let out = m.apply_to(&dense)?;
    PhotonicState::single_photon(&out)
}

/// Two-photon evolution by expanding `a†_p a†_q -> Σ_{i,j} m[i,p] m[j,q] a†_i a†_j`.
///
/// The input coefficient is divided by `sqrt(Π n!)` to reach the creation
/// operator product and the output picks up `sqrt(Π n!)` again, which gives
/// the factor `sqrt(2)` on doubly occupied modes.
pub fn apply_two_photon(m: &ModeMatrix, s: &PhotonicState) -> Result<PhotonicState> {
    if s.photon_number != 2 {
        return Err(Error::UnsupportedPhotonNumber(s.photon_number));
    }
    if m.dim() != s.modes {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: s.modes });
    }
    let dim = s.modes;
    let mut out: BTreeMap<FockOccupation, Complex64> = BTreeMap::new();
    let mut counts = vec![0u8; dim];
    for (occ, amp) in &s.amplitudes {
        let photons = occ.photon_modes();
        let (p, q) = (photons[0], photons[1]);
        let coeff = amp / occ.bosonic_factor();
        for i in 0..dim {
            let mi = m.get(i, p);
            if mi.is_zero() {
                continue;
            }
            for j in 0..dim {
                let mj = m.get(j, q);
                if mj.is_zero() {
                    continue;
                }
                counts.iter_mut().for_each(|c| *c = 0);
                counts[i] += 1;
                counts[j] += 1;
                let key = FockOccupation::new(counts.clone());
                let factor = key.bosonic_factor();
                *out.entry(key).or_insert_with(Complex64::zero) += coeff * mi * mj * factor;
            }
        }
    }
    Ok(PhotonicState { modes: dim, photon_number: 2, amplitudes: out })
}

/// Free-function form of [`PhotonicState::vacuum_project`].
pub fn vacuum_project(s: &PhotonicState, error_modes: &[usize]) -> Result<(PhotonicState, f64)> {
    s.vacuum_project(error_modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn splitter() -> ModeMatrix {
        ModeMatrix::splitter(FRAC_PI_4)
    }

    #[test]
    fn identity_leaves_single_photon_unchanged() {
        let s = PhotonicState::single_photon(&[c64(0.6, 0.0), c64(0.0, 0.8)]).unwrap();
        let out = apply_single_photon(&ModeMatrix::identity(2), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn x_gate_moves_photon() {
        let x = ModeMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let out = apply_single_photon(&x, &PhotonicState::basis(2, &[0]).unwrap()).unwrap();
        assert_eq!(out, PhotonicState::basis(2, &[1]).unwrap());
    }

    #[test]
    fn balanced_splitter_on_one_photon() {
        let out = apply_single_photon(&splitter(), &PhotonicState::basis(2, &[0]).unwrap()).unwrap();
        assert!((out.amplitude(&[0]) - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(&[1]) - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_photon_dimension_mismatch() {
        let s = PhotonicState::basis(3, &[0]).unwrap();
        assert!(apply_single_photon(&splitter(), &s).is_err());
        let s2 = PhotonicState::basis(3, &[0, 1]).unwrap();
        assert!(apply_two_photon(&splitter(), &s2).is_err());
    }

    #[test]
    fn two_photon_identity_and_swap() {
        let s = PhotonicState::basis(4, &[0, 1]).unwrap();
        assert_eq!(apply_two_photon(&ModeMatrix::identity(4), &s).unwrap(), s);
        // swap modes 2 and 4 (one-based)
        let swap = ModeMatrix::permutation(&[0, 3, 2, 1]).unwrap();
        let out = apply_two_photon(&swap, &s).unwrap();
        assert!((out.amplitude(&[0, 3]) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
    }

    /// Brute force: expand (a†_0 + a†_1)(a†_0 - a†_1)/2 by hand.
    #[test]
    fn hong_ou_mandel_dip() {
        let s = PhotonicState::basis(2, &[0, 1]).unwrap();
        let out = apply_two_photon(&splitter(), &s).unwrap();
        let coincidence = out.amplitude(&[0, 1]);
        assert!(coincidence.norm() < 1e-12);
        // a†_0 a†_1 -> (a†_0² - a†_1²)/2 = (sqrt2|2,0> - sqrt2|0,2>)/2
        assert!((out.amplitude(&[0, 0]) - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[1, 1]) + c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubly_occupied_input_norm() {
        let s = PhotonicState::basis(2, &[0, 0]).unwrap();
        let out = apply_two_photon(&splitter(), &s).unwrap();
        // |2,0> -> (|2,0> + sqrt2|1,1> + |0,2>)/2
        assert!((out.amplitude(&[0, 0]) - c64(0.5, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[0, 1]) - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&[1, 1]) - c64(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn vacuum_projection_examples() {
        let s = PhotonicState::basis(2, &[0]).unwrap();
        let (kept, n) = s.vacuum_project(&[1]).unwrap();
        assert_eq!(kept, s);
        assert_eq!(n, 1.0);

        let plus = PhotonicState::single_photon(&[c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let (kept, n) = plus.vacuum_project(&[1]).unwrap();
        assert!((n - 0.5).abs() < 1e-15);
        assert_eq!(kept.len(), 1);
        assert!((kept.amplitude(&[0]) - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let (empty, n) = PhotonicState::basis(2, &[1]).unwrap().vacuum_project(&[1]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(n, 0.0);
        assert!(empty.normalized().is_none());
        assert!(s.vacuum_project(&[2]).is_err());
    }

    #[test]
    fn rejects_mixed_and_large_photon_numbers() {
        let a = FockOccupation::from_photons(3, &[0]).unwrap();
        let b = FockOccupation::from_photons(3, &[0, 1]).unwrap();
        let mixed = PhotonicState::from_terms(3, [(a, c64(1.0, 0.0)), (b, c64(1.0, 0.0))]);
        assert_eq!(mixed, Err(Error::MixedPhotonNumber { expected: 1, found: 2 }));
        assert_eq!(PhotonicState::basis(3, &[0, 1, 2]), Err(Error::UnsupportedPhotonNumber(3)));
    }

    #[test]
    fn restrict_and_embed_round_trip() {
        let s = PhotonicState::basis(2, &[0, 1]).unwrap();
        let big = s.embed_modes(&[2, 5], 6).unwrap();
        assert!((big.amplitude(&[2, 5]) - c64(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(big.restrict(&[2, 5]).unwrap(), s);
        assert!(big.restrict(&[2, 3]).is_err());
    }
}
