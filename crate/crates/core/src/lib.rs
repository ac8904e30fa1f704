//! Random walks in i.i.d. uniformly elliptic random environments on `Z^d`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the pure
//! algorithmic pieces:
//!
//! * [`environment`]: site kernels and the lazily evaluated environment,
//! * [`walk`]: the quenched Markov chain and directional projections,
//! * [`regeneration`]: the ladder recursion for regeneration times, `k_n`
//!   and the per-block increments,
//! * [`statistics`]: plug-in estimators of the LIL constants plus tail and
//!   independence diagnostics,
//! * [`lil`]: the normalized LIL statistic, its three-term decomposition
//!   along dyadic checkpoints and error-term reports.
//!
//! IO, configuration and scheduling live in the `rwre-lab` crate.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod environment;
pub mod error;
pub mod lil;
pub mod regeneration;
pub mod rng;
pub mod statistics;
pub mod walk;

pub use environment::{EnvironmentModel, EnvironmentView, TransitionKernel, Variant};
pub use error::{Error, Result};
pub use regeneration::{CensorPolicy, LadderState, RegenSample, RegenerationSequence};
pub use walk::{Trajectory, WalkSeed};

/// Largest supported lattice dimension. Kernels are stored inline.
pub const MAX_DIM: usize = 8;

/// Tolerance used for stochasticity and unit-norm checks.
pub const TOLERANCE: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks `|u| = 1` within [`TOLERANCE`].
pub fn check_unit(u: &[f64]) -> Result<()> {
    let norm = libm::sqrt(dot(u, u));
    if u.is_empty() || !((norm - 1.0).abs() <= TOLERANCE) {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(())
}
