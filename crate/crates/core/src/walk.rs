//! The quenched Markov chain `X_n` under `P_omega^x`.

use alloc::vec::Vec;

use crate::environment::{direction, EnvironmentView};
use crate::rng::{mix64, tag, CounterStream};
use crate::{check_unit, dot, Error, Result, MAX_DIM};

/// Horizons are capped so that coordinates can never overflow `i64`.
pub const MAX_HORIZON: usize = 1 << 40;

/// Seed of the walk's own randomness, independent of the environment seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkSeed {
    pub replica_seed: u64,
}

impl WalkSeed {
    pub fn new(replica_seed: u64) -> Self {
        Self { replica_seed }
    }

    /// The uniform stream driving the steps; variate `k` drives step `k`.
    pub fn stream(&self) -> CounterStream {
        CounterStream::new(mix64(self.replica_seed ^ tag::WALK))
    }
}

/// A lattice path `X_0, ..., X_n` with its step directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    dim: usize,
    steps: Vec<u8>,
    // Flattened `(n + 1) x d` coordinates.
    positions: Vec<i64>,
}

impl Trajectory {
    /// Rebuilds a trajectory from explicit positions.
    ///
    /// Fails with `(row, error)` at the first pair of consecutive positions
    /// that are not nearest neighbours.
    pub fn from_positions(dim: usize, positions: Vec<i64>) -> core::result::Result<Self, (usize, Error)> {
        if dim == 0 || dim > MAX_DIM || positions.is_empty() || !positions.len().is_multiple_of(dim) {
            return Err((0, Error::DimensionMismatch { expected: dim, got: positions.len() }));
        }
        let rows = positions.len() / dim;
        let mut steps = Vec::with_capacity(rows - 1);
        for r in 1..rows {
            let prev = &positions[(r - 1) * dim..r * dim];
            let cur = &positions[r * dim..(r + 1) * dim];
            let mut found = None;
            let mut l1 = 0u64;
            for axis in 0..dim {
                let diff = cur[axis].wrapping_sub(prev[axis]);
                l1 = l1.saturating_add(diff.unsigned_abs());
                if diff == 1 {
                    found = Some(2 * axis);
                } else if diff == -1 {
                    found = Some(2 * axis + 1);
                }
            }
            match found {
                Some(dir) if l1 == 1 => steps.push(dir as u8),
                _ => return Err((r, Error::InvalidModel("consecutive positions are not nearest neighbours"))),
            }
        }
        Ok(Self { dim, steps, positions })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &[i64] {
        self.position(0)
    }

    pub fn steps(&self) -> &[u8] {
        &self.steps
    }

    /// `X_k`.
    #[inline]
    pub fn position(&self, k: usize) -> &[i64] {
        &self.positions[k * self.dim..(k + 1) * self.dim]
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }
}

/// Runs `horizon` steps of the walk in `env` from `start`.
///
/// Step `k` draws the `k`-th variate of the seed's stream and inverts the
/// CDF of the kernel at `X_k` in the fixed direction order.
pub fn simulate(env: &EnvironmentView, start: &[i64], horizon: usize, seed: WalkSeed) -> Trajectory {
    let dim = env.dimension();
    assert_eq!(start.len(), dim, "start has wrong dimension");
    assert!(horizon <= MAX_HORIZON, "horizon exceeds 2^40");
    let stream = seed.stream();
    let mut steps = Vec::with_capacity(horizon);
    let mut positions = Vec::with_capacity((horizon + 1) * dim);
    let mut cur = [0i64; MAX_DIM];
    cur[..dim].copy_from_slice(start);
    positions.extend_from_slice(start);
    for k in 0..horizon {
        let kernel = env.kernel_at(&cur[..dim]);
        let dir = kernel.sample_direction(stream.uniform(k as u64));
        let (axis, sign) = direction(dir);
        cur[axis] += sign;
        steps.push(dir as u8);
        positions.extend_from_slice(&cur[..dim]);
    }
    Trajectory { dim, steps, positions }
}

/// `(X_k . ell)_{k = 0..n}`.
pub fn projection(t: &Trajectory, ell: &[f64]) -> Result<Vec<f64>> {
    check_unit(ell)?;
    if ell.len() != t.dim {
        return Err(Error::DimensionMismatch { expected: t.dim, got: ell.len() });
    }
    let mut x = [0.0f64; MAX_DIM];
    Ok(t.positions()
        .map(|p| {
            for (xi, &pi) in x.iter_mut().zip(p) {
                *xi = pi as f64;
            }
            dot(&x[..t.dim], ell)
        })
        .collect())
}

/// If `ell` is `+e_i` or `-e_i` exactly, returns `(i, sign)`.
pub fn axis_of(ell: &[f64]) -> Option<(usize, i64)> {
    let mut found = None;
    for (i, &c) in ell.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        if found.is_some() || c.abs() != 1.0 {
            return None;
        }
        found = Some((i, if c > 0.0 { 1 } else { -1 }));
    }
    found
}

/// Integer projection onto `sign * e_axis`.
pub fn axis_projection(t: &Trajectory, axis: usize, sign: i64) -> Vec<i64> {
    t.positions().map(|p| sign * p[axis]).collect()
}
