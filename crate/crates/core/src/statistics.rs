//! Estimators of the constants in the law of the iterated logarithm.
//!
//! Everything here is computed from regeneration blocks with
//! `first_block == false`: only those share the law of the first block under
//! `P^0(. | D = infinity)`. The first block of each path is tracked separately
//! and only enters the first-term moments of [`lyapunov_profile`].
//!
//! Two routes are provided. The slice estimators (`estimate_*`) fold a block
//! collection directly. [`BlockMoments`] keeps mergeable sums so that long
//! runs never have to retain their blocks; its [`BlockMoments::summarize`] is
//! checked against the slice estimators in the tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::regeneration::{z_increment, RegenSample};
use crate::rng::SplitMix64;
use crate::{check_unit, Error, Result};

fn non_first(samples: &[RegenSample]) -> impl Iterator<Item = &RegenSample> + Clone {
    samples.iter().filter(|s| !s.first_block)
}

fn require_blocks(samples: &[RegenSample], min: usize) -> Result<usize> {
    let n = non_first(samples).count();
    if n < min {
        return Err(Error::InsufficientRegenerations(if min == 1 {
            "need at least one non-first block"
        } else {
            "need at least two non-first blocks"
        }));
    }
    Ok(n)
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub standard_error: f64,
}

/// `sum delta_x / sum delta_tau` over non-first blocks.
pub fn estimate_velocity(samples: &[RegenSample]) -> Result<Vec<f64>> {
    require_blocks(samples, 1)?;
    let dim = samples[0].delta_x.len();
    let mut sum_dx = vec![0i64; dim];
    let mut sum_tau = 0u64;
    for s in non_first(samples) {
        for (acc, x) in sum_dx.iter_mut().zip(&s.delta_x) {
            *acc += x;
        }
        sum_tau += s.delta_tau as u64;
    }
    Ok(sum_dx.iter().map(|&x| x as f64 / sum_tau as f64).collect())
}

/// Mean block length, i.e. the estimate of `E^0[tau_1 | D = infinity]`.
pub fn estimate_mean_tau(samples: &[RegenSample]) -> Result<MeanEstimate> {
    let n = require_blocks(samples, 1)?;
    let mean = non_first(samples).map(|s| s.delta_tau as f64).sum::<f64>() / n as f64;
    let standard_error = if n > 1 {
        let ss: f64 = non_first(samples).map(|s| { let d = s.delta_tau as f64 - mean; d * d }).sum();
        libm::sqrt(ss / (n - 1) as f64 / n as f64)
    } else {
        0.0
    };
    Ok(MeanEstimate { mean, standard_error })
}

/// Second moment of `Z^u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoment {
    /// Mean of `Z^2`: the reported `c_u`.
    pub uncentered: f64,
    /// Sample variance of `Z` (divisor `N`).
    pub centered: f64,
}

/// `c_u` as the mean of `(Z_k^u)^2` over non-first blocks, `Z` taken against `v`.
pub fn estimate_cu(samples: &[RegenSample], v: &[f64], u: &[f64]) -> Result<SecondMoment> {
    let n = require_blocks(samples, 2)? as f64;
    check_unit(u)?;
    let (mut sum, mut sum2) = (0.0, 0.0);
    for s in non_first(samples) {
        let z = z_increment(s, v, u);
        sum += z;
        sum2 += z * z;
    }
    let uncentered = sum2 / n;
    let mean = sum / n;
    Ok(SecondMoment { uncentered, centered: (uncentered - mean * mean).max(0.0) })
}

/// Mean of `|delta_x . u|^3` over non-first blocks.
pub fn estimate_third_moment(samples: &[RegenSample], u: &[f64]) -> Result<f64> {
    let n = require_blocks(samples, 1)?;
    check_unit(u)?;
    Ok(non_first(samples).map(|s| { let a = s.projected(u); libm::fabs(a) * a * a }).sum::<f64>() / n as f64)
}

/// `phi(x) = sqrt(2 x log log sqrt(x))`, defined for `x > e^2`.
pub fn phi(x: f64) -> Result<f64> {
    let e2 = core::f64::consts::E * core::f64::consts::E;
    if !(x > e2) || !x.is_finite() {
        return Err(Error::DomainError { what: "phi (requires x > e^2)", x });
    }
    let loglog = libm::log(libm::log(libm::sqrt(x)));
    if !(loglog > 0.0) {
        return Err(Error::DomainError { what: "phi (requires x > e^2)", x });
    }
    Ok(libm::sqrt(2.0 * x * loglog))
}

/// Plug-in estimates for one direction `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionEstimate {
    pub u: Vec<f64>,
    /// Mean of `Z^2` (uncentered `c_u`).
    pub c_u_hat: f64,
    pub c_u_centered: f64,
    /// Mean of `|delta_x . u|^3` over non-first blocks.
    pub c_hat_u_hat: f64,
    /// First-block moments `E^0[(X_{tau_1} . u)^2]`, `E^0[|X_{tau_1} . u|^3]`,
    /// pooled over paths.
    pub first_m2: f64,
    pub first_m3: f64,
}

/// Bootstrap standard errors, aligned with the fields of [`EstimateSummary`].
#[derive(Debug, Clone, PartialEq)]
pub struct StandardErrors {
    pub resamples: usize,
    pub v_hat: Vec<f64>,
    pub mean_tau_hat: f64,
    pub c_u_hat: Vec<f64>,
    pub c_hat_u_hat: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSummary {
    pub v_hat: Vec<f64>,
    pub mean_tau_hat: f64,
    /// Standard error of `mean_tau_hat` from the block-length variance.
    pub mean_tau_se: f64,
    pub directions: Vec<DirectionEstimate>,
    pub n_blocks: u64,
    pub n_first_blocks: u64,
    pub standard_errors: Option<StandardErrors>,
}

impl EstimateSummary {
    /// Non-fatal invariant violations (`v . ell <= 0` for a supposedly
    /// ballistic run, `mean_tau < 1`).
    pub fn warnings(&self, ell: &[f64]) -> Vec<&'static str> {
        let mut w = Vec::new();
        let v_ell: f64 = self.v_hat.iter().zip(ell).map(|(a, b)| a * b).sum();
        if !(v_ell > 0.0) {
            w.push("v_hat . ell <= 0: the run does not look ballistic in direction ell");
        }
        if !(self.mean_tau_hat >= 1.0) {
            w.push("mean_tau_hat < 1");
        }
        w
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct DirectionSums {
    a: f64,
    a2: f64,
    a_tau: f64,
    abs_a3: f64,
    first_a2: f64,
    first_abs_a3: f64,
}

/// Mergeable sufficient statistics of a block collection for a fixed list of
/// directions `u`.
///
/// Integer sums are exact; floating sums depend on push order, so merge
/// partial results in a fixed order when bit-reproducibility matters.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMoments {
    dirs: Vec<Vec<f64>>,
    n_blocks: u64,
    n_first: u64,
    sum_tau: u64,
    sum_tau2: u128,
    sum_dx: Vec<i64>,
    sums: Vec<DirectionSums>,
}

impl BlockMoments {
    pub fn new(dim: usize, dirs: &[Vec<f64>]) -> Result<Self> {
        for u in dirs {
            check_unit(u)?;
            if u.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: u.len() });
            }
        }
        Ok(Self {
            dirs: dirs.to_vec(),
            n_blocks: 0,
            n_first: 0,
            sum_tau: 0,
            sum_tau2: 0,
            sum_dx: vec![0; dim],
            sums: vec![DirectionSums::default(); dirs.len()],
        })
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.dirs
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_blocks
    }

    pub fn n_first_blocks(&self) -> u64 {
        self.n_first
    }

    pub fn push(&mut self, s: &RegenSample) {
        if s.first_block {
            self.n_first += 1;
            for (acc, u) in self.sums.iter_mut().zip(&self.dirs) {
                let a = s.projected(u);
                acc.first_a2 += a * a;
                acc.first_abs_a3 += libm::fabs(a) * a * a;
            }
            return;
        }
        let tau = s.delta_tau as u64;
        self.n_blocks += 1;
        self.sum_tau += tau;
        self.sum_tau2 += tau as u128 * tau as u128;
        for (acc, x) in self.sum_dx.iter_mut().zip(&s.delta_x) {
            *acc += x;
        }
        let t = tau as f64;
        for (acc, u) in self.sums.iter_mut().zip(&self.dirs) {
            let a = s.projected(u);
            acc.a += a;
            acc.a2 += a * a;
            acc.a_tau += a * t;
            acc.abs_a3 += libm::fabs(a) * a * a;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.dirs, other.dirs, "merging moments over different directions");
        self.n_blocks += other.n_blocks;
        self.n_first += other.n_first;
        self.sum_tau += other.sum_tau;
        self.sum_tau2 += other.sum_tau2;
        for (a, b) in self.sum_dx.iter_mut().zip(&other.sum_dx) {
            *a += b;
        }
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.a += b.a;
            a.a2 += b.a2;
            a.a_tau += b.a_tau;
            a.abs_a3 += b.abs_a3;
            a.first_a2 += b.first_a2;
            a.first_abs_a3 += b.first_abs_a3;
        }
    }

    /// Plug-in estimates with `v` estimated from the same blocks.
    pub fn summarize(&self) -> Result<EstimateSummary> {
        if self.n_blocks < 2 {
            return Err(Error::InsufficientRegenerations("need at least two non-first blocks"));
        }
        let v: Vec<f64> = self.sum_dx.iter().map(|&x| x as f64 / self.sum_tau as f64).collect();
        self.summarize_with(&v)
    }

    /// Plug-in estimates with `Z` centered at an externally supplied `v`.
    /// `v_hat` is still the ratio estimate.
    pub fn summarize_with(&self, v: &[f64]) -> Result<EstimateSummary> {
        if self.n_blocks < 2 {
            return Err(Error::InsufficientRegenerations("need at least two non-first blocks"));
        }
        let n = self.n_blocks as f64;
        let v_hat: Vec<f64> = self.sum_dx.iter().map(|&x| x as f64 / self.sum_tau as f64).collect();
        let mean_tau = self.sum_tau as f64 / n;
        let var_tau = (self.sum_tau2 as f64 / n - mean_tau * mean_tau).max(0.0) * n / (n - 1.0);
        let s_tau = self.sum_tau as f64;
        let s_tau2 = self.sum_tau2 as f64;
        let directions = self
            .dirs
            .iter()
            .zip(&self.sums)
            .map(|(u, acc)| {
                let w: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                let z2 = (acc.a2 - 2.0 * w * acc.a_tau + w * w * s_tau2) / n;
                let z1 = (acc.a - w * s_tau) / n;
                let first = self.n_first.max(1) as f64;
                DirectionEstimate {
                    u: u.clone(),
                    c_u_hat: z2.max(0.0),
                    c_u_centered: (z2 - z1 * z1).max(0.0),
                    c_hat_u_hat: acc.abs_a3 / n,
                    first_m2: acc.first_a2 / first,
                    first_m3: acc.first_abs_a3 / first,
                }
            })
            .collect();
        Ok(EstimateSummary {
            v_hat,
            mean_tau_hat: mean_tau,
            mean_tau_se: libm::sqrt(var_tau / n),
            directions,
            n_blocks: self.n_blocks,
            n_first_blocks: self.n_first,
            standard_errors: None,
        })
    }
}

/// Block bootstrap over non-first regeneration blocks.
///
/// Each resample draws `N` blocks with replacement and recomputes every
/// estimate (including `v`); the standard error is the sample standard
/// deviation of the replicates.
pub fn bootstrap_standard_errors(
    samples: &[RegenSample],
    dirs: &[Vec<f64>],
    resamples: usize,
    seed: u64,
) -> Result<StandardErrors> {
    let blocks: Vec<&RegenSample> = non_first(samples).collect();
    if blocks.len() < 2 {
        return Err(Error::InsufficientRegenerations("need at least two non-first blocks"));
    }
    if resamples < 2 {
        return Err(Error::InsufficientRegenerations("bootstrap needs at least two resamples"));
    }
    let dim = blocks[0].delta_x.len();
    let mut rng = SplitMix64::new(seed);
    let mut replicates = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut m = BlockMoments::new(dim, dirs)?;
        for _ in 0..blocks.len() {
            m.push(blocks[rng.below(blocks.len())]);
        }
        replicates.push(m.summarize()?);
    }
    let sd = |f: &dyn Fn(&EstimateSummary) -> f64| -> f64 {
        let n = replicates.len() as f64;
        let mean = replicates.iter().map(f).sum::<f64>() / n;
        libm::sqrt(replicates.iter().map(|r| { let d = f(r) - mean; d * d }).sum::<f64>() / (n - 1.0))
    };
    Ok(StandardErrors {
        resamples,
        v_hat: (0..dim).map(|i| sd(&|r| r.v_hat[i])).collect(),
        mean_tau_hat: sd(&|r| r.mean_tau_hat),
        c_u_hat: (0..dirs.len()).map(|j| sd(&|r| r.directions[j].c_u_hat)).collect(),
        c_hat_u_hat: (0..dirs.len()).map(|j| sd(&|r| r.directions[j].c_hat_u_hat)).collect(),
    })
}

/// Lyapunov ratio `Gamma_k / s_k^3 * (log s_k)^(1 + eps)` with
/// `s_k^2 = first_m2 + (k - 1) c_u` and `Gamma_k = first_m3 + (k - 1) c_hat_u`.
pub fn lyapunov_profile(est: &DirectionEstimate, k_list: &[u64], epsilon: f64) -> Result<Vec<f64>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::DomainError { what: "lyapunov_profile epsilon (requires 0 < eps < 1)", x: epsilon });
    }
    k_list
        .iter()
        .map(|&k| {
            let km1 = k.saturating_sub(1) as f64;
            let s2 = est.first_m2 + km1 * est.c_u_hat;
            let gamma = est.first_m3 + km1 * est.c_hat_u_hat;
            let s = libm::sqrt(s2);
            if !(s > 1.0) {
                return Err(Error::DomainError { what: "lyapunov_profile (requires s_k > 1)", x: s });
            }
            Ok(gamma / (s * s * s) * libm::pow(libm::log(s), 1.0 + epsilon))
        })
        .collect()
}

/// Parameters of the empirical `E[exp(c X*^gamma)]` check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDiagnosticConfig {
    gamma: f64,
    c: f64,
}

impl TailDiagnosticConfig {
    pub fn new(gamma: f64, c: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::DomainError { what: "tail diagnostic gamma (requires 0 < gamma < 1)", x: gamma });
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::DomainError { what: "tail diagnostic c (requires c > 0)", x: c });
        }
        Ok(Self { gamma, c })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDiagnostic {
    /// Mean of `exp(c * block_sup^gamma)` over non-first blocks (1 if none).
    pub mean: f64,
    /// Share of the total carried by the largest 1% of summands.
    pub top_share: f64,
    /// `top_share > 0.5`: the mean is dominated by a handful of blocks.
    pub unstable: bool,
    pub n_blocks: usize,
}

/// Finite-sample evidence on the exponential tail of the block supremum.
/// This can flag instability; it cannot certify the tail condition.
pub fn tail_diagnostic(samples: &[RegenSample], cfg: TailDiagnosticConfig) -> TailDiagnostic {
    let mut terms: Vec<f64> =
        non_first(samples).map(|s| libm::exp(cfg.c * libm::pow(s.block_sup, cfg.gamma))).collect();
    let n = terms.len();
    if n == 0 {
        return TailDiagnostic { mean: 1.0, top_share: 0.0, unstable: false, n_blocks: 0 };
    }
    let total: f64 = terms.iter().sum();
    let top = n.div_ceil(100);
    terms.sort_unstable_by(|a, b| b.total_cmp(a));
    let top_sum: f64 = terms[..top].iter().sum();
    let top_share = top_sum / total;
    TailDiagnostic { mean: total / n as f64, top_share, unstable: top_share > 0.5, n_blocks: n }
}

/// Lag-`lag` sample autocorrelation of `z`.
pub fn independence_diagnostic(z: &[f64], lag: usize) -> Result<f64> {
    if lag == 0 || z.len() <= lag {
        return Err(Error::InsufficientRegenerations("sequence must be longer than the lag"));
    }
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let denom: f64 = z.iter().map(|x| (x - mean) * (x - mean)).sum();
    if !(denom > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let num: f64 = z.windows(lag + 1).map(|w| (w[0] - mean) * (w[lag] - mean)).sum();
    Ok(num / denom)
}

/// `Z_k^u` for the non-first blocks, in order.
pub fn z_values(samples: &[RegenSample], v: &[f64], u: &[f64]) -> Vec<f64> {
    non_first(samples).map(|s| z_increment(s, v, u)).collect()
}
