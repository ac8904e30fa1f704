//! Regeneration times along a direction `ell`.
//!
//! The first regeneration time is built by the ladder recursion
//!
//! ```text
//! S_0 = 0,  R_0 = 0,  M_0 = X_0 . ell
//! S_{k+1} = T_{>= M_k + 1}
//! R_{k+1} = S_{k+1} + D o theta_{S_{k+1}}
//! M_{k+1} = sup { X_m . ell : m <= R_{k+1} }
//! tau_1   = S_K,  K = first j with S_j finite and R_j infinite
//! ```
//!
//! and later ones by re-running it on the walk shifted to `tau_k`. On a
//! finite path "`R_j` infinite" can only be observed as "no strict drop below
//! `X_{S_j} . ell` before the horizon"; a [`CensorPolicy`] additionally asks
//! for `guard` steps of confirmation before accepting a candidate.
//!
//! Projections are generic over [`Height`] so that axis directions can use an
//! exact integer path; both paths run the same comparisons.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Sub;

use crate::walk::Trajectory;
use crate::{check_unit, Error, Result};

/// Values of a projection `X_n . ell`.
pub trait Height: Copy + PartialOrd + Sub<Output = Self> + core::fmt::Debug {
    /// `self + 1`, the level increment of the ladder recursion.
    fn plus_one(self) -> Self;
    fn to_f64(self) -> f64;
}

impl Height for f64 {
    #[inline(always)]
    fn plus_one(self) -> Self {
        self + 1.0
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Height for i64 {
    #[inline(always)]
    fn plus_one(self) -> Self {
        self + 1
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

#[inline(always)]
fn max_of<H: Height>(a: H, b: H) -> H {
    if b > a {
        b
    } else {
        a
    }
}

/// Finite-horizon surrogate for the event `R_j = infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensorPolicy {
    /// Minimum number of steps that must follow an accepted candidate.
    pub guard: usize,
}

impl CensorPolicy {
    pub const DEFAULT_GUARD: usize = 1000;

    pub fn new(guard: usize) -> Self {
        Self { guard }
    }
}

impl Default for CensorPolicy {
    fn default() -> Self {
        Self::new(Self::DEFAULT_GUARD)
    }
}

/// State of the ladder recursion after `k` rounds. `None` encodes a time that
/// is infinite as far as the horizon can tell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderState<H = f64> {
    pub k: usize,
    pub level: H,
    pub s: Option<usize>,
    pub r: Option<usize>,
}

/// `D`: the first `m >= 0` with `proj[from + m] < proj[from]`, or `None` when
/// the projection never drops strictly below its value at `from`.
pub fn stopping_time_d<H: Height>(proj: &[H], from: usize) -> Result<Option<usize>> {
    let start = *proj.get(from).ok_or(Error::IndexOutOfRange { index: from, len: proj.len() })?;
    Ok(proj[from..].iter().position(|&x| x < start))
}

/// `T_{>= level}`: the first `n` with `proj[n] >= level`.
pub fn stopping_time_t<H: Height>(proj: &[H], level: H) -> Option<usize> {
    proj.iter().position(|&x| x >= level)
}

/// Literal evaluation of the ladder recursion on `proj`, returning `tau_1`
/// and the final ladder state.
///
/// This is the reference implementation; it rescans from the start in every
/// round and is quadratic in the worst case.
pub fn first_regeneration_oracle<H: Height>(
    proj: &[H],
    policy: CensorPolicy,
) -> Result<(usize, LadderState<H>)> {
    let Some(&x0) = proj.first() else {
        return Err(Error::Censored);
    };
    let horizon = proj.len() - 1;
    let mut state = LadderState { k: 0, level: x0, s: Some(0), r: Some(0) };
    loop {
        let s = stopping_time_t(proj, state.level.plus_one()).ok_or(Error::Censored)?;
        state.k += 1;
        state.s = Some(s);
        match stopping_time_d(proj, s)? {
            Some(m) => {
                let r = s + m;
                state.r = Some(r);
                state.level = proj[..=r].iter().copied().fold(x0, max_of);
            }
            None => {
                state.r = None;
                return if s + policy.guard <= horizon { Ok((s, state)) } else { Err(Error::Censored) };
            }
        }
    }
}

/// Accepted regeneration times `tau_1 < tau_2 < ...` of one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegenerationSequence {
    /// `tau_1, tau_2, ...`; `tau_0 = 0` is implicit.
    pub times: Vec<usize>,
    /// Candidates at or after this index can no longer be confirmed, so
    /// `k_n` is only determined for `n < censored_tail_from`.
    pub censored_tail_from: usize,
    pub horizon: usize,
    pub guard: usize,
    /// Ladder rounds that ended with a finite `D` (rejected candidates).
    pub backtracks: usize,
}

impl RegenerationSequence {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `tau_k` with `tau_0 = 0`.
    pub fn tau(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.times[k - 1]
        }
    }
}

/// Runs the ladder recursion repeatedly, re-based at each accepted time, in a
/// single left-to-right pass.
///
/// Uses suffix minima to decide `D = infinity` in O(1), so the total cost is
/// O(horizon).
pub fn detect_regenerations<H: Height>(proj: &[H], policy: CensorPolicy) -> RegenerationSequence {
    let horizon = proj.len().saturating_sub(1);
    let mut out = RegenerationSequence {
        times: Vec::new(),
        censored_tail_from: (horizon + 1).saturating_sub(policy.guard),
        horizon,
        guard: policy.guard,
        backtracks: 0,
    };
    if proj.is_empty() {
        out.censored_tail_from = 0;
        return out;
    }
    // suffix_min[i] = min proj[i..]
    let mut suffix_min = vec![proj[horizon]; proj.len()];
    for i in (0..horizon).rev() {
        suffix_min[i] = if proj[i] < suffix_min[i + 1] { proj[i] } else { suffix_min[i + 1] };
    }

    let mut level = proj[0];
    let mut running_max = proj[0];
    let mut t = 1;
    while t <= horizon {
        let x = proj[t];
        running_max = max_of(running_max, x);
        if x < level.plus_one() {
            t += 1;
            continue;
        }
        // t = S_{k+1} of the current block.
        if t == horizon || !(suffix_min[t + 1] < x) {
            if t + policy.guard > horizon {
                break;
            }
            out.times.push(t);
            level = x;
            running_max = x;
            t += 1;
            continue;
        }
        out.backtracks += 1;
        let mut r = t + 1;
        while !(proj[r] < x) {
            running_max = max_of(running_max, proj[r]);
            r += 1;
        }
        level = running_max;
        t = r + 1;
    }
    out
}

/// Oracle route for a whole path: [`first_regeneration_oracle`] applied to
/// the path shifted to each accepted time.
pub fn detect_regenerations_by_oracle<H: Height>(proj: &[H], policy: CensorPolicy) -> Vec<usize> {
    let mut times = Vec::new();
    let mut base = 0;
    while base < proj.len() {
        match first_regeneration_oracle(&proj[base..], policy) {
            Ok((tau, _)) => {
                base += tau;
                times.push(base);
            }
            Err(_) => break,
        }
    }
    times
}

/// One regeneration block `(tau_{k-1}, tau_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegenSample {
    /// Block index `k >= 1`.
    pub k: usize,
    pub delta_tau: usize,
    pub delta_x: Vec<i64>,
    /// `sup |X_m - X_{tau_{k-1}}|` (Euclidean) over the block.
    pub block_sup: f64,
    /// Block 1 starts at time 0, not at a regeneration, and has a different law.
    pub first_block: bool,
}

impl RegenSample {
    /// `delta_x . u`.
    #[inline]
    pub fn projected(&self, u: &[f64]) -> f64 {
        self.delta_x.iter().zip(u).map(|(&x, &w)| x as f64 * w).sum()
    }
}

/// Cuts `t` into the blocks delimited by `0 = tau_0 < tau_1 < ...`.
pub fn extract_samples(t: &Trajectory, r: &RegenerationSequence, ell: &[f64]) -> Result<Vec<RegenSample>> {
    check_unit(ell)?;
    if ell.len() != t.dimension() {
        return Err(Error::DimensionMismatch { expected: t.dimension(), got: ell.len() });
    }
    if r.times.len() < 2 {
        return Err(Error::InsufficientRegenerations("fewer than two regeneration times"));
    }
    let mut prev = 0;
    let mut out = Vec::with_capacity(r.times.len());
    for (i, &tau) in r.times.iter().enumerate() {
        if tau > t.len() {
            return Err(Error::IndexOutOfRange { index: tau, len: t.len() + 1 });
        }
        out.push(block_between(t, prev, tau, i + 1));
        prev = tau;
    }
    Ok(out)
}

/// The block `(from, to]` of `t` as block number `k`; block 1 is flagged as
/// the first block.
///
/// # Panics
/// If `from > to` or `to > t.len()`.
pub fn block_between(t: &Trajectory, from: usize, to: usize, k: usize) -> RegenSample {
    assert!(from <= to && to <= t.len(), "block ({from}, {to}] outside the path");
    let origin = t.position(from);
    let mut sup2 = 0i64;
    for m in from..=to {
        let d2 = t.position(m).iter().zip(origin).map(|(a, b)| (a - b) * (a - b)).sum::<i64>();
        if d2 > sup2 {
            sup2 = d2;
        }
    }
    RegenSample {
        k,
        delta_tau: to - from,
        delta_x: t.position(to).iter().zip(origin).map(|(a, b)| a - b).collect(),
        block_sup: libm::sqrt(sup2 as f64),
        first_block: k == 1,
    }
}

/// `Z_k^u = (delta_x - delta_tau v) . u`.
#[inline]
pub fn z_increment(s: &RegenSample, v: &[f64], u: &[f64]) -> f64 {
    z_of(&s.delta_x, s.delta_tau, v, u)
}

/// `(dx - dt v) . u` for an arbitrary increment.
#[inline]
pub fn z_of(delta_x: &[i64], delta_tau: usize, v: &[f64], u: &[f64]) -> f64 {
    let dt = delta_tau as f64;
    delta_x.iter().zip(v).zip(u).map(|((&x, &vi), &ui)| (x as f64 - dt * vi) * ui).sum()
}

/// `k_n`: the largest `k` with `tau_k <= n`.
pub fn count_kn(r: &RegenerationSequence, n: usize) -> Result<usize> {
    if n >= r.censored_tail_from {
        return Err(Error::Undetermined { n, censored_from: r.censored_tail_from });
    }
    Ok(r.times.partition_point(|&tau| tau <= n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{presets, EnvironmentView};
    use crate::walk::{axis_projection, projection, simulate, WalkSeed};

    fn f(v: &[i64]) -> Vec<f64> {
        v.iter().map(|&x| x as f64).collect()
    }

    #[test]
    fn d_examples() {
        assert_eq!(stopping_time_d(&f(&[0, 1, 0, 1]), 1), Ok(Some(1)));
        assert_eq!(stopping_time_d(&f(&[0, 1, 2, 3]), 0), Ok(None));
        assert_eq!(stopping_time_d(&f(&[2, 2, 1]), 0), Ok(Some(2)));
        assert!(matches!(stopping_time_d(&f(&[0]), 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn t_examples() {
        assert_eq!(stopping_time_t(&f(&[0, 1, 2]), 1.0), Some(1));
        assert_eq!(stopping_time_t(&f(&[0, 1, 2]), 0.0), Some(0));
        assert_eq!(stopping_time_t(&f(&[0, -1, -2]), 1.0), None);
    }

    #[test]
    fn oracle_hand_traces() {
        let (tau, st) = first_regeneration_oracle(&f(&[0, 1, 0, 1, 2, 3, 4, 5]), CensorPolicy::new(3)).unwrap();
        assert_eq!(tau, 4);
        assert_eq!(st, LadderState { k: 2, level: 1.0, s: Some(4), r: None });

        let inc: Vec<f64> = (0..10).map(|x| x as f64).collect();
        let (tau, st) = first_regeneration_oracle(&inc, CensorPolicy::new(9 - 1)).unwrap();
        assert_eq!((tau, st.k), (1, 1));

        let down: Vec<f64> = (0..10).map(|x| -(x as f64)).collect();
        assert_eq!(first_regeneration_oracle(&down, CensorPolicy::new(0)), Err(Error::Censored));
    }

    #[test]
    fn oracle_respects_guard() {
        let p = f(&[0, 1, 0, 1, 2, 3, 4, 5]);
        assert_eq!(first_regeneration_oracle(&p, CensorPolicy::new(4)), Err(Error::Censored));
    }

    #[test]
    fn detect_examples() {
        let r = detect_regenerations(&f(&[0, 1, 2, 1, 2, 3, 4, 5]), CensorPolicy::new(2));
        assert_eq!(r.times, vec![1, 5]);
        assert_eq!(r.backtracks, 1);
        let inc: Vec<f64> = (0..10).map(|x| x as f64).collect();
        let r = detect_regenerations(&inc, CensorPolicy::new(0));
        assert_eq!(r.times, (1..10).collect::<Vec<_>>());
        assert!(detect_regenerations::<f64>(&[], CensorPolicy::new(0)).is_empty());
        assert!(detect_regenerations(&[0.0], CensorPolicy::new(0)).is_empty());
    }

    #[test]
    fn non_axis_levels_track_intermediate_maxima() {
        // Levels are not integers, so S_2 = T_{>= M_1 + 1} with M_1 = 1.2.
        let p = [0.0, 1.2, 0.5, 1.9, 1.4, 2.3, 2.95, 3.0, 3.5];
        let fast = detect_regenerations(&p, CensorPolicy::new(0));
        assert_eq!(fast.times, detect_regenerations_by_oracle(&p, CensorPolicy::new(0)));
        assert_eq!(first_regeneration_oracle(&p, CensorPolicy::new(0)).unwrap().0, 5);
    }

    #[test]
    fn oracle_equivalence_on_simulated_paths() {
        for (i, model) in [presets::drifted_random(), presets::drifted_mixture()].into_iter().enumerate() {
            for s in 0..20u64 {
                let env = EnvironmentView::new(model.clone(), 100 + s);
                let t = simulate(&env, &[0, 0], 3_000, WalkSeed::new(s + 1000 * i as u64));
                let h = core::f64::consts::FRAC_1_SQRT_2;
                for ell in [[1.0, 0.0], [h, h], [0.6, 0.8]] {
                    let p = projection(&t, &ell).unwrap();
                    for guard in [0, 10, 300] {
                        let policy = CensorPolicy::new(guard);
                        assert_eq!(detect_regenerations(&p, policy).times, detect_regenerations_by_oracle(&p, policy));
                    }
                }
            }
        }
    }

    #[test]
    fn integer_path_agrees_with_general_path() {
        let env = EnvironmentView::new(presets::drifted_random(), 5);
        for s in 0..20 {
            let t = simulate(&env, &[0, 0], 5_000, WalkSeed::new(s));
            let general = detect_regenerations(&projection(&t, &[1.0, 0.0]).unwrap(), CensorPolicy::new(100));
            let fast = detect_regenerations(&axis_projection(&t, 0, 1), CensorPolicy::new(100));
            assert_eq!(general, fast);
        }
    }

    #[test]
    fn extract_examples() {
        // X_1 = (1, 0), X_5 = (4, 1)
        let pos = vec![0, 0, 1, 0, 2, 0, 3, 0, 3, 1, 4, 1];
        let t = Trajectory::from_positions(2, pos).unwrap();
        let r = RegenerationSequence { times: vec![1, 5], censored_tail_from: 6, horizon: 5, guard: 0, backtracks: 0 };
        let s = extract_samples(&t, &r, &[1.0, 0.0]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0].first_block && !s[1].first_block);
        assert_eq!((s[1].delta_tau, s[1].delta_x.clone()), (4, vec![3, 1]));
        assert!((s[1].block_sup - libm::sqrt(10.0)).abs() < 1e-15);

        let one = RegenerationSequence { times: vec![1], ..r };
        assert!(matches!(extract_samples(&t, &one, &[1.0, 0.0]), Err(Error::InsufficientRegenerations(_))));
    }

    #[test]
    fn z_examples() {
        let s = RegenSample { k: 2, delta_tau: 4, delta_x: vec![3, 1], block_sup: 0.0, first_block: false };
        assert_eq!(z_increment(&s, &[0.5, 0.0], &[1.0, 0.0]), 1.0);
        assert_eq!(z_increment(&s, &[0.75, 0.25], &[0.6, 0.8]), 0.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(z_increment(&s, &[0.3, 0.1], &[h, -h]), -z_increment(&s, &[0.3, 0.1], &[-h, h]));
    }

    #[test]
    fn kn_examples() {
        let r = RegenerationSequence { times: vec![1, 5, 9], censored_tail_from: 20, horizon: 20, guard: 1, backtracks: 0 };
        assert_eq!(count_kn(&r, 6), Ok(2));
        assert_eq!(count_kn(&r, 0), Ok(0));
        assert_eq!(count_kn(&r, 1), Ok(1));
        assert!(matches!(count_kn(&r, 20), Err(Error::Undetermined { .. })));
    }
}
