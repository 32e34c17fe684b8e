//! Compensated moment sums over fixed-size sample blocks.

use num_complex::Complex64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Success probability and target overlap of one realisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleValues {
    /// `‖𝒰ψ‖²`
    pub ps: f64,
    /// `⟨Ψ|𝒰ψ⟩`, unnormalised.
    pub amp: Complex64,
}

/// Values accumulated per sample, taken relative to the noiseless values
/// `(1, 1, 1, 0)` to keep second moments well conditioned.
const SHIFT: [f64; 4] = [1.0, 1.0, 1.0, 0.0];
const PAIRS: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// Moment sums of `(P_s, |amp|², Re amp, Im amp)` and of the per-sample
/// ratio `|amp|²/P_s`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BlockSums {
    pub count: u64,
    first: [Neumaier; 4],
    second: [Neumaier; 10],
    ratio: Neumaier,
    ratio_sq: Neumaier,
    pub ratio_count: u64,
    /// Samples with `P_s = 0`, left out of the mean of ratios.
    pub excluded: u64,
}

impl BlockSums {
    pub fn push(&mut self, s: SampleValues) {
        let x = [s.ps, s.amp.norm_sqr(), s.amp.re, s.amp.im];
        let d: [f64; 4] = core::array::from_fn(|k| x[k] - SHIFT[k]);
        for k in 0..4 {
            self.first[k].add(d[k]);
        }
        for (slot, &(i, j)) in self.second.iter_mut().zip(PAIRS.iter()) {
            slot.add(d[i] * d[j]);
        }
        if s.ps > 0.0 {
            let r = x[1] / s.ps - 1.0;
            self.ratio.add(r);
            self.ratio_sq.add(r * r);
            self.ratio_count += 1;
        } else {
            self.excluded += 1;
        }
        self.count += 1;
    }

    /// Adds another block's totals; merging blocks in a fixed order gives
    /// the same bits whichever thread produced them.
    pub fn absorb(&mut self, other: &BlockSums) {
        self.count += other.count;
        for k in 0..4 {
            self.first[k].add(other.first[k].value());
        }
        for k in 0..10 {
            self.second[k].add(other.second[k].value());
        }
        self.ratio.add(other.ratio.value());
        self.ratio_sq.add(other.ratio_sq.value());
        self.ratio_count += other.ratio_count;
        self.excluded += other.excluded;
    }

    pub(crate) fn mean(&self, k: usize) -> f64 {
        SHIFT[k] + self.first[k].value() / self.count as f64
    }

    /// Sample covariance with `n − 1` normalisation.
    pub(crate) fn cov(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let slot = PAIRS.iter().position(|&p| p == (i, j)).expect("pair listed");
        let n = self.count as f64;
        if self.count < 2 {
            return 0.0;
        }
        let c = (self.second[slot].value() - self.first[i].value() * self.first[j].value() / n) / (n - 1.0);
        if i == j {
            c.max(0.0)
        } else {
            c
        }
    }

    pub(crate) fn ratio_mean_var(&self) -> (f64, f64) {
        let n = self.ratio_count as f64;
        if self.ratio_count == 0 {
            return (f64::NAN, f64::NAN);
        }
        let s = self.ratio.value();
        let mean = 1.0 + s / n;
        let var = if self.ratio_count < 2 { 0.0 } else { ((self.ratio_sq.value() - s * s / n) / (n - 1.0)).max(0.0) };
        (mean, var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn compensated_sum_beats_naive() {
        let mut n = Neumaier::default();
        let mut naive = 0.0;
        for x in [1.0, 1e100, 1.0, -1e100] {
            n.add(x);
            naive += x;
        }
        assert_eq!(n.value(), 2.0);
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn moments_match_direct_computation() {
        let samples: Vec<SampleValues> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.37;
                SampleValues { ps: 0.9 + 0.05 * t.sin(), amp: Complex64::new(0.94 + 0.01 * t.cos(), 0.02 * (2.0 * t).sin()) }
            })
            .collect();
        let mut b = BlockSums::default();
        samples.iter().for_each(|&s| b.push(s));
        let n = samples.len() as f64;
        let mp = samples.iter().map(|s| s.ps).sum::<f64>() / n;
        let ma = samples.iter().map(|s| s.amp.norm_sqr()).sum::<f64>() / n;
        let cov = samples.iter().map(|s| (s.ps - mp) * (s.amp.norm_sqr() - ma)).sum::<f64>() / (n - 1.0);
        assert!((b.mean(0) - mp).abs() < 1e-14);
        assert!((b.mean(1) - ma).abs() < 1e-14);
        assert!((b.cov(0, 1) - cov).abs() < 1e-14);
        assert!((b.cov(1, 0) - cov).abs() < 1e-14);
    }

    #[test]
    fn zero_probability_samples_are_excluded() {
        let mut b = BlockSums::default();
        b.push(SampleValues { ps: 0.0, amp: Complex64::new(0.0, 0.0) });
        b.push(SampleValues { ps: 0.5, amp: Complex64::new(0.5, 0.0) });
        assert_eq!(b.excluded, 1);
        assert_eq!(b.ratio_count, 1);
        assert!((b.ratio_mean_var().0 - 0.5).abs() < 1e-15);
    }
}
