//! Site kernels, environment laws and the lazily evaluated environment.
//!
//! Directions are enumerated as `+e1, -e1, +e2, -e2, ..., +ed, -ed`; index
//! `2i` is `+e_{i+1}` and `2i + 1` is `-e_{i+1}`. This order is part of the
//! external contract: inverse-CDF sampling walks the kernel in this order.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::rng::{mix64, tag, CounterStream, GOLDEN};
use crate::{Error, Result, MAX_DIM, TOLERANCE};

const MAX_DIRS: usize = 2 * MAX_DIM;

/// Unit lattice vector of direction `index` as `(axis, sign)`.
#[inline(always)]
pub fn direction(index: usize) -> (usize, i64) {
    (index / 2, if index.is_multiple_of(2) { 1 } else { -1 })
}

/// Transition probabilities out of one site.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TransitionKernel {
    dim: usize,
    probs: [f64; MAX_DIRS],
}

impl core::fmt::Debug for TransitionKernel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_tuple("TransitionKernel").field(&self.probs()).finish()
    }
}

impl TransitionKernel {
    /// Builds a kernel from `2d` probabilities. Only the shape is checked here;
    /// use [`validate_kernel`] for the stochastic and ellipticity invariants.
    pub fn new(probs: &[f64]) -> Result<Self> {
        let len = probs.len();
        if len == 0 || !len.is_multiple_of(2) || len > MAX_DIRS {
            return Err(Error::KernelLength { len, expected: if len.is_multiple_of(2) { len.clamp(2, MAX_DIRS) } else { len + 1 } });
        }
        let mut buf = [0.0; MAX_DIRS];
        buf[..len].copy_from_slice(probs);
        Ok(Self { dim: len / 2, probs: buf })
    }

    /// The uniform kernel `1/(2d)` in every direction.
    pub fn uniform(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        let mut probs = [0.0; MAX_DIRS];
        probs[..2 * dim].fill(1.0 / (2 * dim) as f64);
        Self { dim, probs }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs[..2 * self.dim]
    }

    /// Inverse-CDF sampling over the fixed direction enumeration.
    ///
    /// Returns the first index whose cumulative mass exceeds `u`; rounding
    /// leftovers above the total mass fall into the last direction.
    #[inline(always)]
    pub fn sample_direction(&self, u: f64) -> usize {
        let n = 2 * self.dim;
        // Cumulative sums are nondecreasing, so the first index with
        // `u < acc` equals the number of partial sums `<= u`.
        let mut acc = 0.0;
        let mut index = 0;
        for p in &self.probs[..n - 1] {
            acc += p;
            index += (acc <= u) as usize;
        }
        index
    }
}

impl TryFrom<Vec<f64>> for TransitionKernel {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(&v)
    }
}

impl From<TransitionKernel> for Vec<f64> {
    fn from(k: TransitionKernel) -> Self {
        k.probs().to_vec()
    }
}

/// Checks that `k` sums to one within `1e-12` and that every entry is at least `kappa`.
pub fn validate_kernel(k: &TransitionKernel, kappa: f64) -> Result<()> {
    let sum: f64 = k.probs().iter().sum();
    if !((sum - 1.0).abs() <= TOLERANCE) {
        return Err(Error::NotStochastic { sum });
    }
    for (index, &value) in k.probs().iter().enumerate() {
        if !(value >= kappa) || value > 1.0 {
            return Err(Error::EllipticityViolation { index, value, kappa });
        }
    }
    Ok(())
}

/// `sum_e p(e) e`.
pub fn mean_drift(k: &TransitionKernel) -> Vec<f64> {
    k.probs().chunks_exact(2).map(|pair| pair[0] - pair[1]).collect()
}

/// The law `mu` of a single site kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Variant {
    /// Every site carries `base`: a homogeneous walk.
    PointMass { base: TransitionKernel },
    /// `(1 - spread) * base + spread * q` with `q` uniform on the simplex
    /// `{q : q_e >= kappa, sum q = 1}`.
    EllipticPerturbation { base: TransitionKernel, spread: f64 },
    /// `k1` with probability `weight`, otherwise `k2`.
    TwoKernelMixture { weight: f64, k1: TransitionKernel, k2: TransitionKernel },
}

/// Dimension, ellipticity constant and site law of an i.i.d. environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentModel {
    pub dimension: usize,
    pub kappa: f64,
    pub variant: Variant,
}

impl EnvironmentModel {
    pub fn new(dimension: usize, kappa: f64, variant: Variant) -> Result<Self> {
        let model = Self { dimension, kappa, variant };
        model.validate()?;
        Ok(model)
    }

    /// Checks that every kernel the variant can emit is valid for `kappa`.
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidModel("dimension must be in 1..=8"));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0 / (2 * d) as f64) {
            return Err(Error::InvalidModel("kappa must lie in (0, 1/(2d)]"));
        }
        let check = |k: &TransitionKernel| -> Result<()> {
            if k.dimension() != d {
                return Err(Error::DimensionMismatch { expected: d, got: k.dimension() });
            }
            validate_kernel(k, self.kappa)
        };
        match &self.variant {
            Variant::PointMass { base } => check(base),
            Variant::EllipticPerturbation { base, spread } => {
                if !(0.0..=1.0).contains(spread) {
                    return Err(Error::InvalidModel("spread must lie in [0, 1]"));
                }
                check(base)
            }
            Variant::TwoKernelMixture { weight, k1, k2 } => {
                if !(0.0..=1.0).contains(weight) {
                    return Err(Error::InvalidModel("mixture weight must lie in [0, 1]"));
                }
                check(k1)?;
                check(k2)
            }
        }
    }

    /// True when the theorem's `d > 1` hypothesis is met. `d = 1` is a debug mode.
    pub fn within_theorem_hypothesis(&self) -> bool {
        self.dimension > 1
    }
}

/// Stock models used by the harness and the acceptance suite.
pub mod presets {
    use super::*;

    /// The drifted kernel `(0.4, 0.1, 0.25, 0.25)` in `d = 2`.
    pub fn drifted_kernel() -> TransitionKernel {
        TransitionKernel::new(&[0.4, 0.1, 0.25, 0.25]).unwrap()
    }

    /// Homogeneous walk with the drifted kernel; velocity `(0.3, 0)`.
    pub fn drifted_point_mass() -> EnvironmentModel {
        EnvironmentModel::new(2, 0.1, Variant::PointMass { base: drifted_kernel() }).unwrap()
    }

    /// Random perturbation of the drifted kernel with spread 0.25 and
    /// `kappa = 0.05`. Every site keeps local drift `>= 0.025` along `e1`
    /// (non-nestling), so the walk is ballistic in direction `e1`.
    pub fn drifted_random() -> EnvironmentModel {
        EnvironmentModel::new(
            2,
            0.05,
            Variant::EllipticPerturbation { base: drifted_kernel(), spread: 0.25 },
        )
        .unwrap()
    }

    /// Two-kernel mixture: a strongly drifted kernel and a mildly backward one.
    pub fn drifted_mixture() -> EnvironmentModel {
        let strong = TransitionKernel::new(&[0.55, 0.05, 0.2, 0.2]).unwrap();
        let weak = TransitionKernel::new(&[0.2, 0.3, 0.25, 0.25]).unwrap();
        EnvironmentModel::new(2, 0.05, Variant::TwoKernelMixture { weight: 0.8, k1: strong, k2: weak })
            .unwrap()
    }

    pub fn by_name(name: &str) -> Option<EnvironmentModel> {
        match name {
            "drifted-point-mass" => Some(drifted_point_mass()),
            "drifted-random" => Some(drifted_random()),
            "drifted-mixture" => Some(drifted_mixture()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 3] = ["drifted-point-mass", "drifted-random", "drifted-mixture"];
}

/// One realization `omega` of the environment: a model plus a seed.
///
/// The kernel at a site is a pure function of `(env_seed, site)`; nothing is
/// stored, so the view covers the whole infinite lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentView {
    model: EnvironmentModel,
    env_seed: u64,
    key: u64,
}

impl EnvironmentView {
    pub fn new(model: EnvironmentModel, env_seed: u64) -> Self {
        let key = mix64(env_seed ^ tag::ENVIRONMENT);
        Self { model, env_seed, key }
    }

    pub fn model(&self) -> &EnvironmentModel {
        &self.model
    }

    pub fn env_seed(&self) -> u64 {
        self.env_seed
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension
    }

    #[inline(always)]
    fn site_stream(&self, site: &[i64]) -> CounterStream {
        let mut h = self.key;
        for (i, &c) in site.iter().enumerate() {
            h = mix64(h ^ (c as u64).wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN)));
        }
        CounterStream::new(h)
    }

    /// The kernel `omega(site, .)`.
    ///
    /// # Panics
    /// If `site.len()` differs from the model dimension.
    #[inline]
    pub fn kernel_at(&self, site: &[i64]) -> TransitionKernel {
        assert_eq!(site.len(), self.model.dimension, "site dimension mismatch");
        match &self.model.variant {
            Variant::PointMass { base } => *base,
            Variant::EllipticPerturbation { base, spread } => {
                let stream = self.site_stream(site);
                let n = 2 * self.model.dimension;
                let kappa = self.model.kappa;
                let free = 1.0 - n as f64 * kappa;
                // Spacings of n - 1 sorted uniforms: a uniform point on the simplex.
                let mut cuts = [0.0; MAX_DIRS];
                for j in 0..n - 1 {
                    let x = stream.uniform(j as u64);
                    let mut i = j;
                    while i > 0 && cuts[i - 1] > x {
                        cuts[i] = cuts[i - 1];
                        i -= 1;
                    }
                    cuts[i] = x;
                }
                cuts[n - 1] = 1.0;
                let mut probs = [0.0; MAX_DIRS];
                let mut prev = 0.0;
                for j in 0..n {
                    let q = kappa + free * (cuts[j] - prev);
                    prev = cuts[j];
                    let p = (1.0 - spread) * base.probs[j] + spread * q;
                    probs[j] = if p < kappa { kappa } else { p };
                }
                TransitionKernel { dim: self.model.dimension, probs }
            }
            Variant::TwoKernelMixture { weight, k1, k2 } => {
                if self.site_stream(site).uniform(0) < *weight {
                    *k1
                } else {
                    *k2
                }
            }
        }
    }
}
