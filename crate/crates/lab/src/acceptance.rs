//! The acceptance suite: one check per criterion, each returning a
//! [`CriterionOutcome`]. Tolerances are fixed constants below; seeds are
//! fixed so every run of the suite sees the same samples.
//!
//! Criteria 3, 8 and 11 share one long LIL run, computed once on first use.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rwre_core::environment::presets;
use rwre_core::lil::decomposition_terms;
use rwre_core::regeneration::{count_kn, detect_regenerations_by_oracle, first_regeneration_oracle, detect_regenerations};
use rwre_core::statistics::{independence_diagnostic, phi, z_values, BlockMoments};
use rwre_core::walk::{axis_projection, projection, simulate};
use rwre_core::{CensorPolicy, EnvironmentView, Error, WalkSeed};

use crate::config::{CheckpointRange, ExperimentConfig, ModelSpec};
use crate::harness::{self, RunResult, Stages};

pub const ORACLE_TRAJECTORIES: usize = 1000;
pub const ORACLE_HORIZON: usize = 10_000;
pub const ORACLE_GUARD: usize = 1000;
pub const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
pub const BASELINE_MIN_BLOCKS: u64 = 100_000;
pub const BASELINE_SE_MULTIPLE: f64 = 3.0;
pub const BASELINE_RELATIVE_TOLERANCE: f64 = 0.05;
pub const VARIANCE_REPLICAS: usize = 10_000;
pub const VARIANCE_N: usize = 10_000;
pub const VARIANCE_RELATIVE_TOLERANCE: f64 = 0.10;
pub const RENEWAL_N: usize = 100_000;
pub const RENEWAL_TOLERANCE: f64 = 0.02;
pub const INDEPENDENCE_BLOCKS: usize = 10_000;
pub const LIL_REPLICAS: usize = 1000;
pub const LIL_MAX_EXP: u32 = 20;
pub const DECAY_EARLY_N: usize = 1 << 12;
pub const DECAY_LATE_N: usize = 1 << 20;
pub const PHI_TOLERANCE: f64 = 1e-12;

/// Master seed of every stochastic check.
pub const SUITE_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    fn new(id: u8, name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self { id, name, passed, detail: detail.into() }
    }

    fn failed(id: u8, name: &'static str, err: impl fmt::Display) -> Self {
        Self::new(id, name, false, format!("error: {err}"))
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] #{:<2} {}: {}", self.id, self.name, self.detail)
    }
}

fn e(i: usize) -> Vec<f64> {
    let mut v = vec![0.0; 2];
    v[i] = 1.0;
    v
}

fn neg(u: &[f64]) -> Vec<f64> {
    u.iter().map(|x| -x).collect()
}

fn preset(name: &str) -> ModelSpec {
    ModelSpec::preset(name).expect("built-in preset")
}

/// Detector vs. block-by-block oracle on simulated paths, for `e1` and a
/// non-axis direction.
pub fn oracle_equivalence() -> CriterionOutcome {
    const NAME: &str = "oracle equivalence";
    let clock = Instant::now();
    let model = presets::drifted_random();
    let policy = CensorPolicy::new(ORACLE_GUARD);
    let diag = vec![0.8, 0.6];
    let cfg = ExperimentConfig::new(ModelSpec::from_model(&model, 0), e(0), ORACLE_HORIZON);
    let per_path = harness::par_map(None, ORACLE_TRAJECTORIES, |i| {
        let seeds = cfg.replica_seeds(i);
        let env = EnvironmentView::new(model.clone(), seeds.env_seed);
        let t = simulate(&env, &[0, 0], ORACLE_HORIZON, WalkSeed::new(seeds.walk_seed));
        let axis = axis_projection(&t, 0, 1);
        let general = projection(&t, &diag).expect("unit vector");
        let a = detect_regenerations(&axis, policy);
        let b = detect_regenerations(&general, policy);
        let mismatches = usize::from(a.times != detect_regenerations_by_oracle(&axis, policy))
            + usize::from(b.times != detect_regenerations_by_oracle(&general, policy));
        (mismatches, a.len() + b.len())
    });
    let per_path = match per_path {
        Ok(p) => p,
        Err(err) => return CriterionOutcome::failed(1, NAME, err),
    };
    let mismatches: usize = per_path.iter().map(|p| p.0).sum();
    let times: usize = per_path.iter().map(|p| p.1).sum();
    let elapsed = clock.elapsed();
    CriterionOutcome::new(
        1,
        NAME,
        mismatches == 0 && elapsed < ORACLE_TIME_LIMIT,
        format!(
            "{mismatches} mismatching paths of {} ({} directions x {ORACLE_TRAJECTORIES}), {times} regeneration times, {:.1}s (limit {}s)",
            2 * ORACLE_TRAJECTORIES,
            2,
            elapsed.as_secs_f64(),
            ORACLE_TIME_LIMIT.as_secs()
        ),
    )
}

/// The three hand-traced projections.
pub fn hand_traces() -> CriterionOutcome {
    let f = |v: &[i64]| -> Vec<f64> { v.iter().map(|&x| x as f64).collect() };
    let first = first_regeneration_oracle(&f(&[0, 1, 0, 1, 2, 3, 4, 5]), CensorPolicy::new(3)).map(|r| r.0);
    let both = detect_regenerations(&f(&[0, 1, 2, 1, 2, 3, 4, 5]), CensorPolicy::new(2)).times;
    let inc: Vec<f64> = (0..10).map(|x| x as f64).collect();
    let third = first_regeneration_oracle(&inc, CensorPolicy::new(0)).map(|r| r.0);
    let passed = first == Ok(4) && both == [1, 5] && third == Ok(1);
    CriterionOutcome::new(
        2,
        "hand-traced recursion",
        passed,
        format!("[0,1,0,1,2,3,4,5] -> tau_1 = {first:?}; [0,1,2,1,2,3,4,5] -> {both:?}; 0..9 -> tau_1 = {third:?}"),
    )
}

/// Configuration of the long run shared by criteria 3, 8 and 11.
pub fn lil_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(preset("drifted-random"), e(0), (1 << LIL_MAX_EXP) + ORACLE_GUARD);
    cfg.u_list = vec![e(0), e(1), neg(&e(0)), neg(&e(1))];
    cfg.replicas = LIL_REPLICAS;
    cfg.guard = ORACLE_GUARD;
    cfg.master_seed = SUITE_SEED;
    cfg.checkpoints = CheckpointRange { min_exp: 10, max_exp: LIL_MAX_EXP };
    cfg.retain_blocks = false;
    cfg.output_dir = PathBuf::new();
    cfg
}

fn lil_run() -> &'static Result<(RunResult, Duration), String> {
    static RUN: OnceLock<Result<(RunResult, Duration), String>> = OnceLock::new();
    RUN.get_or_init(|| {
        let clock = Instant::now();
        let r = harness::run(&lil_config(), Stages { trajectories: false, estimates: true, lil: true }).map_err(|e| e.to_string())?;
        if r.lil.len() != 4 {
            return Err(format!("LIL run produced {} direction curves: {:?}", r.lil.len(), r.warnings));
        }
        Ok((r, clock.elapsed()))
    })
}

/// Number of replicas of the shared run re-simulated for the block-by-block
/// route of the decomposition.
pub const IDENTITY_RESIMULATED: usize = 20;

/// `main + term2 + term3 = statistic` at every checkpoint of every replica.
pub fn decomposition_identity() -> CriterionOutcome {
    const NAME: &str = "decomposition identity";
    let (run, _) = match lil_run() {
        Ok(r) => r,
        Err(err) => return CriterionOutcome::failed(3, NAME, err),
    };
    let mut worst = 0.0f64;
    let mut points = 0usize;
    let mut curves = 0usize;
    for dc in &run.lil {
        for (_, c) in &dc.curves {
            worst = worst.max(c.max_identity_residual());
            points += c.checkpoints.len();
            curves += 1;
        }
    }
    // Block-by-block sum of Z on re-simulated replicas, same constants.
    let cfg = lil_config();
    let model = cfg.model.model().expect("preset");
    let dc = &run.lil[0];
    let block_route = harness::par_map(None, IDENTITY_RESIMULATED, |i| -> Result<f64, String> {
        let env = cfg.environment(&model, i);
        let t = simulate(&env, &[0, 0], cfg.horizon, WalkSeed::new(cfg.replica_seeds(i).walk_seed));
        let r = harness::detect(&t, &cfg.ell, cfg.guard).map_err(|e| e.to_string())?;
        let mut w = 0.0f64;
        for &n in &run.checkpoints {
            let d = decomposition_terms(&t, &r, n, &dc.constants, &dc.u).map_err(|e| e.to_string())?;
            w = w.max(d.identity_residual());
        }
        Ok(w)
    });
    let block_worst = match block_route.map_err(|e| e.to_string()).and_then(|v| v.into_iter().collect::<Result<Vec<_>, _>>()) {
        Ok(v) => v.into_iter().fold(0.0, f64::max),
        Err(err) => return CriterionOutcome::failed(3, NAME, err),
    };
    let expected_curves = LIL_REPLICAS * run.lil.len();
    CriterionOutcome::new(
        3,
        NAME,
        worst <= IDENTITY_TOLERANCE && block_worst <= IDENTITY_TOLERANCE && curves == expected_curves,
        format!(
            "max relative residual {worst:.2e} over {points} checkpoints ({curves}/{expected_curves} curves); \
             block-by-block route {block_worst:.2e} on {IDENTITY_RESIMULATED} replicas (tolerance {IDENTITY_TOLERANCE:.0e})"
        ),
    )
}

/// Point-mass kernel: `v = (0.3, 0)`, `c_u / mean_tau` equals the one-step
/// variance along `u`.
pub fn homogeneous_baseline() -> CriterionOutcome {
    const NAME: &str = "homogeneous baseline";
    let mut cfg = ExperimentConfig::new(preset("drifted-point-mass"), e(0), 131_000);
    cfg.u_list = vec![e(0), e(1)];
    cfg.replicas = 4;
    cfg.master_seed = SUITE_SEED;
    let run = match harness::run(&cfg, Stages::ESTIMATE) {
        Ok(r) => r,
        Err(err) => return CriterionOutcome::failed(4, NAME, err),
    };
    let (Some(est), Some(s)) = (&run.estimates, &run.summary) else {
        return CriterionOutcome::failed(4, NAME, "no estimates");
    };
    let Some(se) = &est.se_v_hat else {
        return CriterionOutcome::failed(4, NAME, "no bootstrap standard errors");
    };
    let v_true = [0.3, 0.0];
    let z: Vec<f64> = (0..2).map(|i| (s.v_hat[i] - v_true[i]).abs() / se[i]).collect();
    let target = [0.41, 0.5];
    let ratio: Vec<f64> = s.directions.iter().map(|d| d.c_u_hat / s.mean_tau_hat).collect();
    let rel: Vec<f64> = ratio.iter().zip(target).map(|(r, t)| (r - t).abs() / t).collect();
    let passed = s.n_blocks >= BASELINE_MIN_BLOCKS
        && z.iter().all(|&z| z <= BASELINE_SE_MULTIPLE)
        && rel.iter().all(|&r| r <= BASELINE_RELATIVE_TOLERANCE);
    CriterionOutcome::new(
        4,
        NAME,
        passed,
        format!(
            "{} blocks; v_hat = ({:.5}, {:.5}), |v_hat - v| / se = ({:.2}, {:.2}); c_u/mean_tau = {:.4} (e1, target 0.41), {:.4} (e2, target 0.5), rel. err ({:.3}, {:.3})",
            s.n_blocks, s.v_hat[0], s.v_hat[1], z[0], z[1], ratio[0], ratio[1], rel[0], rel[1]
        ),
    )
}

/// Sample variance of `(X_n - n v) . u / sqrt(n c_u / mean_tau)` with the
/// analytic constants of the point-mass kernel.
pub fn variance_identity() -> CriterionOutcome {
    const NAME: &str = "variance identity";
    let model = presets::drifted_point_mass();
    let mut cfg = ExperimentConfig::new(ModelSpec::from_model(&model, 0), e(0), VARIANCE_N);
    cfg.master_seed = SUITE_SEED ^ 5;
    let v = [0.3, 0.0];
    let rate = [0.41, 0.5];
    let samples = harness::par_map(None, VARIANCE_REPLICAS, |i| {
        let env = cfg.environment(&model, i);
        let t = simulate(&env, &[0, 0], VARIANCE_N, WalkSeed::new(cfg.replica_seeds(i).walk_seed));
        let x = t.position(VARIANCE_N);
        let n = VARIANCE_N as f64;
        [0, 1].map(|a| (x[a] as f64 - n * v[a]) / (n * rate[a]).sqrt())
    });
    let samples = match samples {
        Ok(s) => s,
        Err(err) => return CriterionOutcome::failed(5, NAME, err),
    };
    let var = |a: usize| {
        let m = samples.iter().map(|s| s[a]).sum::<f64>() / samples.len() as f64;
        samples.iter().map(|s| (s[a] - m).powi(2)).sum::<f64>() / (samples.len() - 1) as f64
    };
    let (v1, v2) = (var(0), var(1));
    let passed = (v1 - 1.0).abs() <= VARIANCE_RELATIVE_TOLERANCE && (v2 - 1.0).abs() <= VARIANCE_RELATIVE_TOLERANCE;
    CriterionOutcome::new(
        5,
        NAME,
        passed,
        format!("sample variance {v1:.4} (u = e1), {v2:.4} (u = e2) over {VARIANCE_REPLICAS} replicas at n = {VARIANCE_N}; tolerance 10%"),
    )
}

/// `|k_n / n - 1 / mean_tau_hat|` at `n = 10^5` on every replica.
pub fn renewal_density() -> CriterionOutcome {
    const NAME: &str = "renewal density";
    const REPLICAS: usize = 8;
    let mut details = Vec::new();
    let mut passed = true;
    for name in ["drifted-point-mass", "drifted-random"] {
        let mut cfg = ExperimentConfig::new(preset(name), e(0), RENEWAL_N + ORACLE_GUARD);
        cfg.master_seed = SUITE_SEED ^ 6;
        let model = cfg.model.model().expect("preset");
        let per = harness::par_map(None, REPLICAS, |i| -> Result<_, String> {
            let env = cfg.environment(&model, i);
            let t = simulate(&env, &[0, 0], cfg.horizon, WalkSeed::new(cfg.replica_seeds(i).walk_seed));
            let r = harness::detect(&t, &cfg.ell, cfg.guard).map_err(|e| e.to_string())?;
            let blocks = harness::blocks_of(&t, &r, &cfg.ell).map_err(|e| e.to_string())?;
            let mut m = BlockMoments::new(2, &cfg.u_list).map_err(|e| e.to_string())?;
            blocks.iter().for_each(|b| m.push(b));
            let k_n = count_kn(&r, RENEWAL_N).map_err(|e| e.to_string())?;
            Ok((m, k_n))
        });
        let per = match per.map_err(|e| e.to_string()).and_then(|v| v.into_iter().collect::<Result<Vec<_>, _>>()) {
            Ok(p) => p,
            Err(err) => return CriterionOutcome::failed(6, NAME, err),
        };
        let mut merged = BlockMoments::new(2, &cfg.u_list).expect("unit vector");
        per.iter().for_each(|(m, _)| merged.merge(m));
        let mean_tau = match merged.summarize() {
            Ok(s) => s.mean_tau_hat,
            Err(err) => return CriterionOutcome::failed(6, NAME, err),
        };
        let worst = per
            .iter()
            .map(|(_, k)| (*k as f64 / RENEWAL_N as f64 - 1.0 / mean_tau).abs())
            .fold(0.0, f64::max);
        passed &= worst <= RENEWAL_TOLERANCE;
        details.push(format!("{name}: 1/mean_tau_hat = {:.4}, max |k_n/n - 1/mean_tau_hat| = {worst:.4}", 1.0 / mean_tau));
    }
    CriterionOutcome::new(6, NAME, passed, format!("{} ({REPLICAS} replicas each, tolerance {RENEWAL_TOLERANCE})", details.join("; ")))
}

/// Lag-1 and lag-2 autocorrelation of `Z^u` over the first `N` non-first
/// blocks of one path.
pub fn independence() -> CriterionOutcome {
    const NAME: &str = "independence of increments";
    let model = presets::drifted_random();
    let mut cfg = ExperimentConfig::new(ModelSpec::from_model(&model, 0), e(0), 110_000);
    cfg.master_seed = SUITE_SEED ^ 7;
    let env = cfg.environment(&model, 0);
    let t = simulate(&env, &[0, 0], cfg.horizon, WalkSeed::new(cfg.replica_seeds(0).walk_seed));
    let blocks = match harness::detect(&t, &cfg.ell, cfg.guard).and_then(|r| harness::blocks_of(&t, &r, &cfg.ell)) {
        Ok(b) => b,
        Err(err) => return CriterionOutcome::failed(7, NAME, err),
    };
    if blocks.len() < INDEPENDENCE_BLOCKS + 1 {
        return CriterionOutcome::failed(7, NAME, format!("only {} blocks", blocks.len()));
    }
    let blocks = &blocks[..INDEPENDENCE_BLOCKS + 1];
    let v = match rwre_core::statistics::estimate_velocity(blocks) {
        Ok(v) => v,
        Err(err) => return CriterionOutcome::failed(7, NAME, err),
    };
    let bound = 3.0 / (INDEPENDENCE_BLOCKS as f64).sqrt();
    let mut rhos = Vec::new();
    for u in [e(0), e(1)] {
        let z = z_values(blocks, &v, &u);
        for lag in [1, 2] {
            match independence_diagnostic(&z, lag) {
                Ok(r) => rhos.push(r),
                Err(err) => return CriterionOutcome::failed(7, NAME, err),
            }
        }
    }
    CriterionOutcome::new(
        7,
        NAME,
        rhos.iter().all(|r| r.abs() <= bound),
        format!(
            "N = {INDEPENDENCE_BLOCKS}: rho_1, rho_2 = {:.4}, {:.4} (u = e1), {:.4}, {:.4} (u = e2); bound 3/sqrt(N) = {bound:.4}",
            rhos[0], rhos[1], rhos[2], rhos[3]
        ),
    )
}

/// 99th percentile of `|term2|`, `|term3|` at `2^20` against `2^12`.
pub fn error_term_decay() -> CriterionOutcome {
    const NAME: &str = "error-term decay";
    let (run, elapsed) = match lil_run() {
        Ok(r) => r,
        Err(err) => return CriterionOutcome::failed(8, NAME, err),
    };
    let mut passed = true;
    let mut details = Vec::new();
    for (label, dc) in ["e1", "e2"].iter().zip(&run.lil) {
        let row = |n: usize| dc.report.rows.iter().find(|r| r.n == n);
        let (Some(early), Some(late)) = (row(DECAY_EARLY_N), row(DECAY_LATE_N)) else {
            return CriterionOutcome::failed(8, NAME, "checkpoints 2^12 or 2^20 missing");
        };
        passed &= late.q99_abs_t2 < early.q99_abs_t2 && late.q99_abs_t3 < early.q99_abs_t3;
        let first = &dc.report.rows[0];
        details.push(format!(
            "u = {label}: q99|t2| {:.4} -> {:.4}, q99|t3| {:.3e} -> {:.3e} (max|t2| {:.4} at n = {} -> {:.4})",
            early.q99_abs_t2, late.q99_abs_t2, early.q99_abs_t3, late.q99_abs_t3, first.max_abs_t2, first.n, late.max_abs_t2
        ));
    }
    CriterionOutcome::new(
        8,
        NAME,
        passed,
        format!("{} ({LIL_REPLICAS} replicas, shared run took {:.0}s)", details.join("; "), elapsed.as_secs_f64()),
    )
}

/// Closed-form values of `phi` and its domain cut.
pub fn phi_exactness() -> CriterionOutcome {
    use std::f64::consts::{E, LN_2, SQRT_2};
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let a = phi(E.powi(4)).map(|x| rel(x, (2.0 * E.powi(4) * LN_2).sqrt()));
    let b = phi((2.0 * E).exp()).map(|x| rel(x, SQRT_2 * E.exp()));
    let c = phi(E * E);
    let show = |r: &Result<f64, Error>| match r {
        Ok(x) => format!("{x:.1e}"),
        Err(e) => e.to_string(),
    };
    let passed = matches!(a, Ok(r) if r <= PHI_TOLERANCE)
        && matches!(b, Ok(r) if r <= PHI_TOLERANCE)
        && matches!(c, Err(Error::DomainError { .. }));
    CriterionOutcome::new(
        9,
        "phi exactness",
        passed,
        format!(
            "rel. error at e^4: {}, at e^(2e): {}; at e^2: {}",
            show(&a),
            show(&b),
            match c {
                Err(Error::DomainError { .. }) => "DomainError".to_string(),
                other => format!("{other:?}"),
            }
        ),
    )
}

/// Configuration of the determinism check.
pub fn determinism_config(output_dir: PathBuf, workers: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(preset("drifted-random"), vec![0.8, 0.6], 20_000);
    cfg.u_list = vec![e(0), e(1), vec![0.8, 0.6]];
    cfg.replicas = 8;
    cfg.master_seed = SUITE_SEED ^ 10;
    cfg.checkpoints = CheckpointRange { min_exp: 8, max_exp: 14 };
    cfg.output_dir = output_dir;
    cfg.workers = Some(workers);
    cfg
}

/// Every file of `a` except `manifest.json` (which records the worker count
/// and wall time) must exist in `b` with identical bytes, and vice versa.
pub fn compare_dirs(a: &Path, b: &Path) -> Result<usize, String> {
    let list = |d: &Path| -> Result<Vec<String>, String> {
        let mut v: Vec<String> = std::fs::read_dir(d)
            .map_err(|e| format!("{}: {e}", d.display()))?
            .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
            .filter(|n| n != "manifest.json")
            .collect();
        v.sort();
        Ok(v)
    };
    let (la, lb) = (list(a)?, list(b)?);
    if la != lb {
        return Err(format!("file lists differ: {la:?} vs {lb:?}"));
    }
    for name in &la {
        let x = std::fs::read(a.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(name)).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{name} differs"));
        }
    }
    Ok(la.len())
}

fn scratch_dir(label: &str) -> PathBuf {
    static COUNTER: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);
    let k = COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    std::env::temp_dir().join(format!("rwre-acceptance-{}-{k}-{label}", std::process::id()))
}

/// Full pipeline three times: 1 worker, 8 workers, 1 worker again.
pub fn determinism() -> CriterionOutcome {
    const NAME: &str = "determinism";
    let dirs = [scratch_dir("w1"), scratch_dir("w8"), scratch_dir("w1-again")];
    let stages = Stages { trajectories: true, estimates: true, lil: true };
    let result = (|| -> Result<usize, String> {
        for (dir, workers) in dirs.iter().zip([1, 8, 1]) {
            harness::run_experiment(&determinism_config(dir.clone(), workers), stages).map_err(|e| e.to_string())?;
        }
        compare_dirs(&dirs[0], &dirs[1])?;
        compare_dirs(&dirs[0], &dirs[2])
    })();
    for d in &dirs {
        let _ = std::fs::remove_dir_all(d);
    }
    match result {
        Ok(files) => CriterionOutcome::new(
            10,
            NAME,
            true,
            format!("{files} output files byte-identical across 1 vs 8 workers and across two runs"),
        ),
        Err(err) => CriterionOutcome::new(10, NAME, false, err),
    }
}

/// Curves for `-u` are the exact negation of the curves for `u`.
pub fn antisymmetry() -> CriterionOutcome {
    const NAME: &str = "antisymmetry";
    let (run, _) = match lil_run() {
        Ok(r) => r,
        Err(err) => return CriterionOutcome::failed(11, NAME, err),
    };
    let mut compared = 0usize;
    let mut bad = 0usize;
    for (p, m) in [(0, 2), (1, 3)] {
        let (a, b) = (&run.lil[p], &run.lil[m]);
        if a.curves.len() != b.curves.len() {
            return CriterionOutcome::failed(11, NAME, "different number of curves for u and -u");
        }
        for ((ra, ca), (rb, cb)) in a.curves.iter().zip(&b.curves) {
            let negated = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(s, t)| *s == -*t);
            let ok = ra == rb
                && negated(&ca.statistic, &cb.statistic)
                && negated(&ca.term_main, &cb.term_main)
                && negated(&ca.term2, &cb.term2)
                && negated(&ca.term3, &cb.term3)
                && negated(&ca.running_max, &cb.running_min);
            compared += ca.checkpoints.len();
            bad += usize::from(!ok);
        }
    }
    CriterionOutcome::new(
        11,
        NAME,
        bad == 0 && compared > 0,
        format!("{bad} curves differ from the exact negation; {compared} checkpoint values compared for (e1, -e1) and (e2, -e2)"),
    )
}

pub type Criterion = fn() -> CriterionOutcome;

/// All criteria in order.
pub const CRITERIA: [(u8, Criterion); 11] = [
    (1, oracle_equivalence),
    (2, hand_traces),
    (3, decomposition_identity),
    (4, homogeneous_baseline),
    (5, variance_identity),
    (6, renewal_density),
    (7, independence),
    (8, error_term_decay),
    (9, phi_exactness),
    (10, determinism),
    (11, antisymmetry),
];

/// Runs the selected criteria (all when `only` is empty), calling `report`
/// as each one finishes.
pub fn run_selected(only: &[u8], mut report: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .map(|(_, f)| {
            let o = f();
            report(&o);
            o
        })
        .collect()
}

pub fn run_all() -> Vec<CriterionOutcome> {
    run_selected(&[], |_| {})
}
