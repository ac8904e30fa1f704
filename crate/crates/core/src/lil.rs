//! The normalized LIL statistic and its three-term decomposition.
//!
//! For a direction `u` the statistic at time `n` is
//!
//! ```text
//! L_n = (X_n - X_0 - n v) . u / (mean_tau^(-1/2) * sqrt(2 c_u n log log sqrt(n)))
//! ```
//!
//! and splits exactly as `L_n = main + term2 + term3` with
//!
//! ```text
//! main  = sum_{j <= k_n} Z_j^u / (mean_tau^(-1/2) phi(c_u k_n))
//!         * sqrt(k_n log log sqrt(c_u k_n) / (n log log sqrt(n)))
//! term2 =  (X_n - X_{tau_{k_n}}) . u      / denominator
//! term3 = -(n - tau_{k_n}) (v . u)        / denominator
//! ```
//!
//! `term3` carries a minus sign: `sum_j Z_j^u` removes `tau_{k_n} v`, so the
//! remaining `(n - tau_{k_n}) v` has to be subtracted for the identity to hold.
//!
//! Limsup and liminf cannot be observed at finite `n`; curves carry running
//! extremes over dyadic checkpoints instead.

use alloc::vec::Vec;

use crate::regeneration::{count_kn, z_of, RegenerationSequence};
use crate::statistics::phi;
use crate::walk::Trajectory;
use crate::{Error, Result};

/// `n = 2^min_exp, ..., 2^max_exp`.
pub fn dyadic_checkpoints(min_exp: u32, max_exp: u32) -> Vec<usize> {
    (min_exp..=max_exp).map(|j| 1usize << j).collect()
}

/// Constants entering the normalization for one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LilConstants {
    pub v: Vec<f64>,
    pub c_u: f64,
    pub mean_tau: f64,
}

impl LilConstants {
    pub fn new(v: Vec<f64>, c_u: f64, mean_tau: f64) -> Self {
        Self { v, c_u, mean_tau }
    }
}

#[inline]
fn loglog_sqrt(x: f64) -> f64 {
    libm::log(libm::log(libm::sqrt(x)))
}

/// `mean_tau^(-1/2) * sqrt(2 c_u n log log sqrt(n))`.
pub fn lil_denominator(n: usize, c_u: f64, mean_tau: f64) -> Result<f64> {
    if !(c_u > 0.0) {
        return Err(Error::NonpositiveVariance(c_u));
    }
    if !(mean_tau >= 1.0) {
        return Err(Error::DomainError { what: "mean_tau (requires mean_tau >= 1)", x: mean_tau });
    }
    let e2 = core::f64::consts::E * core::f64::consts::E;
    let nf = n as f64;
    if !(nf > e2) {
        return Err(Error::DomainError { what: "LIL normalization (requires n > e^2)", x: nf });
    }
    Ok(libm::pow(mean_tau, -0.5) * libm::sqrt(2.0 * c_u * nf * loglog_sqrt(nf)))
}

/// The statistic for a displacement `X_n - X_0`.
pub fn lil_statistic_from_displacement(displacement: &[i64], n: usize, k: &LilConstants, u: &[f64]) -> Result<f64> {
    let denom = lil_denominator(n, k.c_u, k.mean_tau)?;
    Ok(z_of(displacement, n, &k.v, u) / denom)
}

fn displacement(t: &Trajectory, from: usize, to: usize) -> Vec<i64> {
    t.position(to).iter().zip(t.position(from)).map(|(a, b)| a - b).collect()
}

/// `(X_n - X_0 - n v) . u` over the LIL normalization.
pub fn lil_statistic(t: &Trajectory, n: usize, k: &LilConstants, u: &[f64]) -> Result<f64> {
    if n > t.len() {
        return Err(Error::IndexOutOfRange { index: n, len: t.len() + 1 });
    }
    lil_statistic_from_displacement(&displacement(t, 0, n), n, k, u)
}

/// What a path contributes at checkpoint `n`, independent of the constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    pub k_n: usize,
    pub tau_kn: usize,
    /// `X_n - X_0`.
    pub disp_n: Vec<i64>,
    /// `X_{tau_{k_n}} - X_0`.
    pub disp_tau: Vec<i64>,
}

impl Checkpoint {
    pub fn capture(t: &Trajectory, r: &RegenerationSequence, n: usize) -> Result<Self> {
        if n > t.len() {
            return Err(Error::IndexOutOfRange { index: n, len: t.len() + 1 });
        }
        let k_n = count_kn(r, n)?;
        let tau_kn = r.tau(k_n);
        Ok(Self { n, k_n, tau_kn, disp_n: displacement(t, 0, n), disp_tau: displacement(t, 0, tau_kn) })
    }
}

/// The statistic together with its three summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub statistic: f64,
    pub main: f64,
    pub term2: f64,
    pub term3: f64,
}

impl Decomposition {
    /// `|main + term2 + term3 - statistic|` relative to the largest of the four.
    pub fn identity_residual(&self) -> f64 {
        let scale = self.statistic.abs().max(self.main.abs()).max(self.term2.abs()).max(self.term3.abs());
        let diff = (self.main + self.term2 + self.term3 - self.statistic).abs();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn decompose(n: usize, k_n: usize, tau_kn: usize, sum_z: f64, disp_n: &[i64], disp_tau: &[i64], k: &LilConstants, u: &[f64]) -> Result<Decomposition> {
    let denom = lil_denominator(n, k.c_u, k.mean_tau)?;
    let statistic = z_of(disp_n, n, &k.v, u) / denom;
    let x = k.c_u * k_n as f64;
    let phi_x = phi(x)?;
    let nf = n as f64;
    let main = sum_z / (libm::pow(k.mean_tau, -0.5) * phi_x)
        * libm::sqrt(k_n as f64 * loglog_sqrt(x) / (nf * loglog_sqrt(nf)));
    let tail: f64 = disp_n.iter().zip(disp_tau).zip(u).map(|((a, b), w)| (a - b) as f64 * w).sum();
    let v_u: f64 = k.v.iter().zip(u).map(|(a, b)| a * b).sum();
    let term2 = tail / denom;
    let term3 = -((n - tau_kn) as f64 * v_u) / denom;
    Ok(Decomposition { statistic, main, term2, term3 })
}

/// Decomposition from a captured checkpoint. `sum_{j <= k_n} Z_j` is
/// evaluated on the aggregated increment `(tau_{k_n}, X_{tau_{k_n}} - X_0)`.
pub fn decomposition_at(cp: &Checkpoint, k: &LilConstants, u: &[f64]) -> Result<Decomposition> {
    let sum_z = z_of(&cp.disp_tau, cp.tau_kn, &k.v, u);
    decompose(cp.n, cp.k_n, cp.tau_kn, sum_z, &cp.disp_n, &cp.disp_tau, k, u)
}

/// Decomposition at time `n` of a path, summing `Z_j^u` block by block.
pub fn decomposition_terms(t: &Trajectory, r: &RegenerationSequence, n: usize, k: &LilConstants, u: &[f64]) -> Result<Decomposition> {
    let cp = Checkpoint::capture(t, r, n)?;
    let mut sum_z = 0.0;
    for j in 1..=cp.k_n {
        let (a, b) = (r.tau(j - 1), r.tau(j));
        sum_z += z_of(&displacement(t, a, b), b - a, &k.v, u);
    }
    decompose(cp.n, cp.k_n, cp.tau_kn, sum_z, &cp.disp_n, &cp.disp_tau, k, u)
}

/// Prefix maxima and prefix minima.
pub fn running_extremes(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut max = Vec::with_capacity(values.len());
    let mut min = Vec::with_capacity(values.len());
    for (i, &x) in values.iter().enumerate() {
        if i == 0 {
            max.push(x);
            min.push(x);
        } else {
            max.push(if x > max[i - 1] { x } else { max[i - 1] });
            min.push(if x < min[i - 1] { x } else { min[i - 1] });
        }
    }
    (max, min)
}

/// One path's statistic and decomposition along the checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct LilCurve {
    pub checkpoints: Vec<usize>,
    pub statistic: Vec<f64>,
    pub term_main: Vec<f64>,
    pub term2: Vec<f64>,
    pub term3: Vec<f64>,
    pub running_max: Vec<f64>,
    pub running_min: Vec<f64>,
}

impl LilCurve {
    pub fn from_checkpoints(cps: &[Checkpoint], k: &LilConstants, u: &[f64]) -> Result<Self> {
        let mut c = LilCurve {
            checkpoints: Vec::with_capacity(cps.len()),
            statistic: Vec::with_capacity(cps.len()),
            term_main: Vec::with_capacity(cps.len()),
            term2: Vec::with_capacity(cps.len()),
            term3: Vec::with_capacity(cps.len()),
            running_max: Vec::new(),
            running_min: Vec::new(),
        };
        for cp in cps {
            let d = decomposition_at(cp, k, u)?;
            c.checkpoints.push(cp.n);
            c.statistic.push(d.statistic);
            c.term_main.push(d.main);
            c.term2.push(d.term2);
            c.term3.push(d.term3);
        }
        (c.running_max, c.running_min) = running_extremes(&c.statistic);
        Ok(c)
    }

    /// Largest relative residual of the decomposition identity.
    pub fn max_identity_residual(&self) -> f64 {
        (0..self.checkpoints.len())
            .map(|i| {
                Decomposition {
                    statistic: self.statistic[i],
                    main: self.term_main[i],
                    term2: self.term2[i],
                    term3: self.term3[i],
                }
                .identity_residual()
            })
            .fold(0.0, f64::max)
    }
}

/// Linear-interpolation quantile of `sorted` (ascending, nonempty).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    if lo + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTermRow {
    pub n: usize,
    pub max_abs_t2: f64,
    pub max_abs_t3: f64,
    pub q50_abs_t2: f64,
    pub q90_abs_t2: f64,
    pub q99_abs_t2: f64,
    pub q50_abs_t3: f64,
    pub q90_abs_t3: f64,
    pub q99_abs_t3: f64,
    pub stat_max: f64,
    pub stat_min: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTermReport {
    pub rows: Vec<ErrorTermRow>,
    /// Replica-maximum of `|term2|` never increases along the checkpoints.
    pub t2_max_monotone: bool,
    pub t3_max_monotone: bool,
    /// Last checkpoint is below the first one (99th percentile).
    pub t2_q99_decays: bool,
    pub t3_q99_decays: bool,
}

/// Cross-replica envelopes of `|term2|`, `|term3|` and of the statistic.
///
/// # Panics
/// If the curves do not share the same checkpoints.
pub fn error_term_report(curves: &[LilCurve]) -> ErrorTermReport {
    let Some(first) = curves.first() else {
        return ErrorTermReport { rows: Vec::new(), t2_max_monotone: true, t3_max_monotone: true, t2_q99_decays: false, t3_q99_decays: false };
    };
    let mut rows = Vec::with_capacity(first.checkpoints.len());
    let mut t2 = Vec::with_capacity(curves.len());
    let mut t3 = Vec::with_capacity(curves.len());
    for (i, &n) in first.checkpoints.iter().enumerate() {
        t2.clear();
        t3.clear();
        let (mut smax, mut smin) = (f64::NEG_INFINITY, f64::INFINITY);
        for c in curves {
            assert_eq!(c.checkpoints, first.checkpoints, "curves with different checkpoints");
            t2.push(c.term2[i].abs());
            t3.push(c.term3[i].abs());
            smax = smax.max(c.statistic[i]);
            smin = smin.min(c.statistic[i]);
        }
        t2.sort_unstable_by(f64::total_cmp);
        t3.sort_unstable_by(f64::total_cmp);
        rows.push(ErrorTermRow {
            n,
            max_abs_t2: t2[t2.len() - 1],
            max_abs_t3: t3[t3.len() - 1],
            q50_abs_t2: quantile_sorted(&t2, 0.5),
            q90_abs_t2: quantile_sorted(&t2, 0.9),
            q99_abs_t2: quantile_sorted(&t2, 0.99),
            q50_abs_t3: quantile_sorted(&t3, 0.5),
            q90_abs_t3: quantile_sorted(&t3, 0.9),
            q99_abs_t3: quantile_sorted(&t3, 0.99),
            stat_max: smax,
            stat_min: smin,
        });
    }
    let monotone = |f: fn(&ErrorTermRow) -> f64| rows.windows(2).all(|w| f(&w[1]) <= f(&w[0]));
    let decays = |f: fn(&ErrorTermRow) -> f64| rows.len() >= 2 && f(&rows[rows.len() - 1]) < f(&rows[0]);
    ErrorTermReport {
        t2_max_monotone: monotone(|r| r.max_abs_t2),
        t3_max_monotone: monotone(|r| r.max_abs_t3),
        t2_q99_decays: decays(|r| r.q99_abs_t2),
        t3_q99_decays: decays(|r| r.q99_abs_t3),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{presets, EnvironmentView};
    use crate::regeneration::{detect_regenerations, CensorPolicy};
    use crate::walk::{projection, simulate, WalkSeed};
    use alloc::vec;

    fn consts() -> LilConstants {
        LilConstants::new(vec![0.3, 0.0], 0.5, 2.0)
    }

    #[test]
    fn statistic_small_case() {
        // X_100 = (40, 0): numerator 40 - 30 = 10.
        let got = lil_statistic_from_displacement(&[40, 0], 100, &consts(), &[1.0, 0.0]).unwrap();
        let ll = libm::log(libm::log(10.0));
        let want = 10.0 / (libm::pow(2.0, -0.5) * libm::sqrt(2.0 * 0.5 * 100.0 * ll));
        assert!((got - want).abs() <= 1e-14 * want.abs());
    }

    #[test]
    fn statistic_centered_and_linear() {
        let k = LilConstants::new(vec![0.25, -0.5], 1.0, 1.5);
        assert_eq!(lil_statistic_from_displacement(&[25, -50], 100, &k, &[0.6, 0.8]).unwrap(), 0.0);
        let a = lil_statistic_from_displacement(&[31, 7], 100, &k, &[0.6, 0.8]).unwrap();
        let b = lil_statistic_from_displacement(&[31, 7], 100, &k, &[-0.6, -0.8]).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn statistic_errors() {
        assert!(matches!(lil_statistic_from_displacement(&[1, 0], 7, &consts(), &[1.0, 0.0]), Err(Error::DomainError { .. })));
        let bad = LilConstants::new(vec![0.3, 0.0], 0.0, 2.0);
        assert!(matches!(lil_statistic_from_displacement(&[1, 0], 100, &bad, &[1.0, 0.0]), Err(Error::NonpositiveVariance(_))));
    }

    #[test]
    fn decomposition_identity_and_vanishing_terms() {
        let env = EnvironmentView::new(presets::drifted_random(), 3);
        let t = simulate(&env, &[0, 0], 20_000, WalkSeed::new(3));
        let r = detect_regenerations(&projection(&t, &[1.0, 0.0]).unwrap(), CensorPolicy::new(1000));
        let k = LilConstants::new(vec![0.2, 0.01], 1.3, 2.5);
        for u in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
            for n in dyadic_checkpoints(6, 14) {
                let d = decomposition_terms(&t, &r, n, &k, &u).unwrap();
                assert!(d.identity_residual() <= 1e-9, "{d:?}");
                let cp = Checkpoint::capture(&t, &r, n).unwrap();
                let e = decomposition_at(&cp, &k, &u).unwrap();
                assert_eq!(d.statistic, e.statistic);
                assert!((d.main - e.main).abs() <= 1e-12 * d.main.abs().max(1.0));
            }
            let tau = r.times[40];
            let d = decomposition_terms(&t, &r, tau, &k, &u).unwrap();
            assert_eq!((d.term2, d.term3), (0.0, -0.0));
        }
    }

    #[test]
    fn decomposition_rejects_censored_tail() {
        let env = EnvironmentView::new(presets::drifted_point_mass(), 3);
        let t = simulate(&env, &[0, 0], 2_000, WalkSeed::new(1));
        let r = detect_regenerations(&projection(&t, &[1.0, 0.0]).unwrap(), CensorPolicy::new(500));
        assert!(matches!(decomposition_terms(&t, &r, 1_800, &consts(), &[1.0, 0.0]), Err(Error::Undetermined { .. })));
    }

    #[test]
    fn running_extremes_examples() {
        assert_eq!(running_extremes(&[1.0, -2.0, 3.0]), (vec![1.0, 1.0, 3.0], vec![1.0, -2.0, -2.0]));
        assert_eq!(running_extremes(&[4.0; 3]), (vec![4.0; 3], vec![4.0; 3]));
        let v = [0.5, -1.5, 2.0, 0.1];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let (mx, mn) = running_extremes(&v);
        let (nmx, nmn) = running_extremes(&neg);
        assert_eq!(nmx, mn.iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(nmn, mx.iter().map(|x| -x).collect::<Vec<_>>());
    }

    fn curve(t2: &[f64], t3: &[f64]) -> LilCurve {
        let n = t2.len();
        LilCurve {
            checkpoints: (0..n).map(|i| 16 << i).collect(),
            statistic: vec![0.0; n],
            term_main: vec![0.0; n],
            term2: t2.to_vec(),
            term3: t3.to_vec(),
            running_max: vec![0.0; n],
            running_min: vec![0.0; n],
        }
    }

    #[test]
    fn report_examples() {
        let r = error_term_report(&[curve(&[0.0; 3], &[0.0; 3]), curve(&[0.0; 3], &[0.0; 3])]);
        assert!(r.rows.iter().all(|row| row.max_abs_t2 == 0.0 && row.q99_abs_t3 == 0.0));
        let r = error_term_report(&[curve(&[0.3, -0.2, 0.1], &[-0.5, 0.4, 0.0])]);
        assert_eq!(r.rows.iter().map(|x| x.q99_abs_t2).collect::<Vec<_>>(), vec![0.3, 0.2, 0.1]);
        assert_eq!(r.rows.iter().map(|x| x.max_abs_t3).collect::<Vec<_>>(), vec![0.5, 0.4, 0.0]);
        assert!(r.t2_max_monotone && r.t2_q99_decays && r.t3_q99_decays);
        assert!(error_term_report(&[]).rows.is_empty());
    }

    #[test]
    fn quantiles() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&s, 0.5), 3.0);
        assert_eq!(quantile_sorted(&s, 1.0), 5.0);
        assert_eq!(quantile_sorted(&s, 0.9), 4.6);
        assert_eq!(quantile_sorted(&[7.0], 0.99), 7.0);
    }
}
