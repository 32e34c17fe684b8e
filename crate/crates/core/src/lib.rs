//! Unitary averaging for linear-optical gates.
//!
//! N noisy copies of a gate are placed inside a Hadamard-tree interferometer
//! and the error ports are post-selected on vacuum, so the surviving branch
//! applies the mean `(1/N) Σ U_j` of the copies. This crate holds everything
//! that is pure computation:
//!
//! - [`matrix`] and [`fock`]: mode matrices and sparse one/two-photon Fock
//!   states with vacuum projection.
//! - [`gates`] and [`noise`]: the five-angle single-qubit gate, the four-mode
//!   interferometer, the Type-II fusion network and their noisy draws.
//! - [`averaging`]: averaged and heralded operators, the encoder/decoder tree
//!   and post-selected runs.
//! - [`analytic`]: closed-form success probabilities, fidelities and
//!   effective error/loss rates.
//! - [`montecarlo`]: keyed-stream ensemble estimators and the variant fit.
//! - [`parity`]: parity-code loss recovery.
//! - [`ft`]: fault-tolerance region mapping against a threshold curve.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! drivers and the command line live in the `uavg` crate.

#![no_std]
// `num_traits::Float` supplies float methods without std. When a dependency
// links std (dev-dependencies enable it through feature unification), std's
// inherent float methods shadow the trait and its imports look unused.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod averaging;
mod error;
pub mod fock;
pub mod ft;
pub mod gates;
pub mod matrix;
pub mod montecarlo;
pub mod noise;
pub mod parity;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use analytic::{Copies, FidelityForm, FormulaVariant, FtPoint};
pub use averaging::{AveragingConfig, EncodedCircuit, EncoderNoise, HeraldWeights, PostSelection};
pub use fock::{FockOccupation, PhotonicState};
pub use gates::{FourModeParams, FusionParams, GateParams, NamedGate};
pub use matrix::ModeMatrix;
pub use noise::{NoiseKind, NoiseSpec, SampledParams};

/// Shorthand for building a complex amplitude.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
