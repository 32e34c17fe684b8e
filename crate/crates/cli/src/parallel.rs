//! Block-parallel Monte Carlo driver.

use rayon::prelude::*;
use uavg_core::montecarlo::{merge_blocks, run_block, McConfig, McSummary, SampleKernel};
use uavg_core::{Error, Result};

/// Same result as `run_sequential`, bit for bit: blocks are keyed by index
/// and merged in index order whatever thread ran them.
pub fn run_parallel<K: SampleKernel + ?Sized>(kernel: &K, cfg: &McConfig) -> Result<McSummary> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter { name: "samples", value: 0.0 });
    }
    let blocks = (0..cfg.blocks()).into_par_iter().map(|b| run_block(kernel, cfg, b)).collect::<Result<Vec<_>>>()?;
    Ok(McSummary::from_sums(&merge_blocks(&blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use uavg_core::gates::NamedGate;
    use uavg_core::montecarlo::{run_sequential, AveragedKernel};
    use uavg_core::{NoiseSpec, PhotonicState};

    #[test]
    fn matches_sequential_bit_for_bit() {
        let input = PhotonicState::basis(2, &[0]).unwrap();
        let kernel = AveragedKernel::new(NamedGate::H.params(), NoiseSpec::gaussian(0.02).unwrap(), 4, &input).unwrap();
        let cfg = McConfig::new(3 * 4096 + 17, 99, input);
        assert_eq!(run_parallel(&kernel, &cfg).unwrap(), run_sequential(&kernel, &cfg).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        assert_eq!(pool.install(|| run_parallel(&kernel, &cfg)).unwrap(), run_sequential(&kernel, &cfg).unwrap());
    }

    #[test]
    fn zero_samples_is_rejected() {
        let input = PhotonicState::basis(2, &[0]).unwrap();
        let kernel = AveragedKernel::new(NamedGate::H.params(), NoiseSpec::none(), 1, &input).unwrap();
        assert!(run_parallel(&kernel, &McConfig::new(0, 1, input)).is_err());
    }
}
