//! Square complex matrices acting on optical modes.
//!
//! A [`ModeMatrix`] `m` maps creation operators as `a†_k -> Σ_i m[i,k] a†_i`,
//! so for a single photon it is ordinary matrix-vector multiplication on the
//! mode amplitudes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::{Error, Result};

/// Per-entry tolerance used when checking `M†M = I`.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ModeMatrix {
    dim: usize,
    /// Row-major entries.
    data: Vec<Complex64>,
}

impl ModeMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter { name: "matrix dimension", value: 0.0 });
        }
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, found: data.len() });
        }
        if let Some(bad) = data.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            let value = if bad.re.is_finite() { bad.im } else { bad.re };
            return Err(Error::InvalidParameter { name: "matrix entry", value });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "mode matrix needs at least one mode");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Real-valued matrix from rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self::from_fn(dim, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Complex64::zero())
    }

    /// The lossless two-mode splitter `[[sin θ, cos θ], [cos θ, -sin θ]]`.
    /// `θ = π/4` is the balanced 50:50 splitter.
    pub fn splitter(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_real_rows(&[&[s, c], &[c, -s]])
    }

    /// Permutation matrix sending mode `k` to mode `perm[k]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        for &p in perm {
            if p >= dim {
                return Err(Error::ModeOutOfRange { index: p, modes: dim });
            }
            if seen[p] {
                return Err(Error::DuplicateMode(p));
            }
            seen[p] = true;
        }
        Ok(Self::from_fn(dim, |i, j| if perm[j] == i { Complex64::new(1.0, 0.0) } else { Complex64::zero() }))
    }

    /// Diagonal matrix of phases `e^{iφ_k}`.
    pub fn phases(angles: &[f64]) -> Self {
        Self::from_fn(angles.len(), |i, j| if i == j { Complex64::from_polar(1.0, angles[i]) } else { Complex64::zero() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.matmul_unchecked(rhs))
    }

    pub(crate) fn matmul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut data = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Self { dim: n, data }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub(crate) fn add_scaled_assign(&mut self, rhs: &Self, factor: f64) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * factor;
        }
    }

    /// `self · v` for a column of mode amplitudes.
    pub fn apply_to(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let n = self.dim;
        Ok((0..n).map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Checks `M†M = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = self.adjoint().matmul_unchecked(self);
        gram.max_abs_diff(&Self::identity(self.dim)).map(|d| d <= tol).unwrap_or(false)
    }

    /// Block with the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::LengthMismatch { expected: rows.len(), found: cols.len() });
        }
        for &i in rows.iter().chain(cols) {
            if i >= self.dim {
                return Err(Error::ModeOutOfRange { index: i, modes: self.dim });
            }
        }
        Ok(Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j])))
    }

    /// Places `self` on `targets` of a `total`-mode identity.
    pub fn embed(&self, targets: &[usize], total: usize) -> Result<Self> {
        embed(self, targets, total)
    }
}

/// Identity on untouched modes, `m` on `targets` (in the given order).
pub fn embed(m: &ModeMatrix, targets: &[usize], total: usize) -> Result<ModeMatrix> {
    if targets.len() != m.dim {
        return Err(Error::LengthMismatch { expected: m.dim, found: targets.len() });
    }
    if m.dim > total {
        return Err(Error::DimensionMismatch { expected: total, found: m.dim });
    }
    let mut slot = vec![None; total];
    for (local, &t) in targets.iter().enumerate() {
        if t >= total {
            return Err(Error::ModeOutOfRange { index: t, modes: total });
        }
        if slot[t].is_some() {
            return Err(Error::DuplicateMode(t));
        }
        slot[t] = Some(local);
    }
    Ok(ModeMatrix::from_fn(total, |i, j| match (slot[i], slot[j]) {
        (Some(a), Some(b)) => m.get(a, b),
        (None, None) if i == j => Complex64::new(1.0, 0.0),
        _ => Complex64::zero(),
    }))
}

impl fmt::Debug for ModeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ModeMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn x_gate() -> ModeMatrix {
        ModeMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn embed_identity_into_four_modes() {
        let e = embed(&ModeMatrix::identity(2), &[0, 1], 4).unwrap();
        assert_eq!(e, ModeMatrix::identity(4));
    }

    #[test]
    fn embed_x_swaps_outer_modes() {
        // modes 1 and 3 in one-based counting
        let e = embed(&x_gate(), &[0, 2], 3).unwrap();
        let expected = ModeMatrix::permutation(&[2, 1, 0]).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn embed_rejects_bad_targets() {
        assert_eq!(embed(&x_gate(), &[0, 0], 3), Err(Error::DuplicateMode(0)));
        assert_eq!(embed(&x_gate(), &[0, 3], 3), Err(Error::ModeOutOfRange { index: 3, modes: 3 }));
        assert!(embed(&x_gate(), &[0], 3).is_err());
        assert!(embed(&ModeMatrix::identity(4), &[0, 1, 2, 3], 3).is_err());
    }

    #[test]
    fn balanced_splitter_is_hadamard_like() {
        let b = ModeMatrix::splitter(core::f64::consts::FRAC_PI_4);
        let h = ModeMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]);
        assert!(b.max_abs_diff(&h).unwrap() < 1e-15);
        assert!(b.is_unitary(1e-14));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let bad = ModeMatrix::new(1, alloc::vec![Complex64::new(f64::NAN, 0.0)]);
        assert!(bad.is_err());
        assert!(ModeMatrix::new(2, alloc::vec![Complex64::zero(); 3]).is_err());
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let e = ModeMatrix::identity(2).matmul(&ModeMatrix::identity(3));
        assert_eq!(e, Err(Error::DimensionMismatch { expected: 2, found: 3 }));
    }
}
