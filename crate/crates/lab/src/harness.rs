//! Replica scheduling and the simulate -> detect -> estimate -> LIL pipeline.
//!
//! Replicas run on a rayon pool and are collected in replica order. All
//! floating reductions then happen on one thread in that order, which is what
//! makes the outputs independent of the worker count.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use rwre_core::lil::{dyadic_checkpoints, error_term_report, Checkpoint, ErrorTermReport, LilConstants, LilCurve};
use rwre_core::regeneration::{block_between, detect_regenerations, extract_samples};
use rwre_core::statistics::{
    bootstrap_standard_errors, independence_diagnostic, lyapunov_profile, tail_diagnostic, z_values, BlockMoments,
    EstimateSummary, TailDiagnostic, TailDiagnosticConfig,
};
use rwre_core::walk::{axis_of, axis_projection, projection, simulate};
use rwre_core::{CensorPolicy, EnvironmentModel, EnvironmentView, RegenSample, RegenerationSequence, Trajectory, WalkSeed};
use serde::Serialize;

use crate::config::{ExperimentConfig, ReplicaSeeds};
use crate::error::{LabError, Result};
use crate::io;

/// Which products a run emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    /// One trajectory CSV and one regeneration report per replica.
    pub trajectories: bool,
    pub estimates: bool,
    pub lil: bool,
}

impl Stages {
    pub const ALL: Stages = Stages { trajectories: false, estimates: true, lil: true };
    pub const SIMULATE: Stages = Stages { trajectories: true, estimates: false, lil: false };
    pub const ESTIMATE: Stages = Stages { trajectories: false, estimates: true, lil: false };
}

/// Regeneration times of one path along `ell`, using the exact integer path
/// when `ell` is a signed axis.
pub fn detect(t: &Trajectory, ell: &[f64], guard: usize) -> Result<RegenerationSequence> {
    let policy = CensorPolicy::new(guard);
    Ok(match axis_of(ell) {
        Some((axis, sign)) => detect_regenerations(&axis_projection(t, axis, sign), policy),
        None => detect_regenerations(&projection(t, ell)?, policy),
    })
}

/// Blocks of a path, or none when fewer than two regenerations were found.
pub fn blocks_of(t: &Trajectory, r: &RegenerationSequence, ell: &[f64]) -> Result<Vec<RegenSample>> {
    if r.len() < 2 {
        return Ok(Vec::new());
    }
    Ok(extract_samples(t, r, ell)?)
}

/// What one replica hands back to the reduction.
#[derive(Debug, Clone)]
pub struct ReplicaOutcome {
    pub seeds: ReplicaSeeds,
    pub moments: BlockMoments,
    /// Empty unless `retain_blocks` is set.
    pub blocks: Vec<RegenSample>,
    pub checkpoints: Vec<Checkpoint>,
    pub regenerations: usize,
    pub backtracks: usize,
}

/// Checkpoints every replica can evaluate: `n <= horizon - guard` and
/// `n > e^2`. The rest are returned separately so they can be reported.
pub fn feasible_checkpoints(cfg: &ExperimentConfig) -> (Vec<usize>, Vec<usize>) {
    let e2 = std::f64::consts::E * std::f64::consts::E;
    dyadic_checkpoints(cfg.checkpoints.min_exp, cfg.checkpoints.max_exp)
        .into_iter()
        .partition(|&n| n as f64 > e2 && n + cfg.guard <= cfg.horizon)
}

fn run_replica(
    cfg: &ExperimentConfig,
    model: &EnvironmentModel,
    index: usize,
    checkpoints: &[usize],
    trajectory_dir: Option<&Path>,
) -> Result<ReplicaOutcome> {
    let seeds = cfg.replica_seeds(index);
    let env = EnvironmentView::new(model.clone(), seeds.env_seed);
    let start = vec![0i64; model.dimension];
    let t = simulate(&env, &start, cfg.horizon, WalkSeed::new(seeds.walk_seed));
    let regen = detect(&t, &cfg.ell, cfg.guard)?;
    let blocks = blocks_of(&t, &regen, &cfg.ell)?;
    let mut moments = BlockMoments::new(model.dimension, &cfg.u_list)?;
    for b in &blocks {
        moments.push(b);
    }
    let checkpoints = checkpoints.iter().map(|&n| Checkpoint::capture(&t, &regen, n)).collect::<rwre_core::Result<_>>()?;
    if let Some(dir) = trajectory_dir {
        io::write_trajectory_file(&dir.join(format!("trajectory_{index:05}.csv")), &t, &cfg.ell)?;
        io::write_regeneration_report_file(&dir.join(format!("regenerations_{index:05}.csv")), model.dimension, &blocks)?;
    }
    Ok(ReplicaOutcome {
        seeds,
        moments,
        blocks: if cfg.retain_blocks { blocks } else { Vec::new() },
        checkpoints,
        regenerations: regen.len(),
        backtracks: regen.backtracks,
    })
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| LabError::config(format!("cannot start worker pool: {e}")))
}

/// Runs every replica of `cfg` and returns the outcomes in replica order.
pub fn run_replicas(
    cfg: &ExperimentConfig,
    model: &EnvironmentModel,
    checkpoints: &[usize],
    trajectory_dir: Option<&Path>,
) -> Result<Vec<ReplicaOutcome>> {
    pool(cfg.workers)?.install(|| {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|i| run_replica(cfg, model, i, checkpoints, trajectory_dir))
            .collect()
    })
}

/// Runs `f(0..count)` on the configured pool, results in index order.
pub fn par_map<T: Send>(workers: Option<usize>, count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    Ok(pool(workers)?.install(|| (0..count).into_par_iter().map(f).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovPoint {
    pub k: u64,
    /// One value per entry of `u_list`; `null` where `s_k <= 1`.
    pub ratio: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub gamma: f64,
    pub c: f64,
    pub mean: f64,
    pub top_share: f64,
    pub unstable: bool,
    pub n_blocks: usize,
}

impl TailReport {
    fn new(cfg: TailDiagnosticConfig, t: TailDiagnostic) -> Self {
        Self { gamma: cfg.gamma(), c: cfg.c(), mean: t.mean, top_share: t.top_share, unstable: t.unstable, n_blocks: t.n_blocks }
    }
}

/// Contents of `estimates.json`. Per-direction arrays follow `u_list`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatesFile {
    pub status: &'static str,
    pub message: Option<String>,
    pub ell: Vec<f64>,
    pub u_list: Vec<Vec<f64>>,
    pub guard: usize,
    pub horizon: usize,
    pub replicas: usize,
    pub n_blocks: u64,
    pub n_first_blocks: u64,
    pub regenerations: usize,
    pub backtracks: usize,
    pub v_hat: Option<Vec<f64>>,
    /// Velocity used to center `Z`: the plug-in `v_hat` or the configured one.
    pub v_used: Option<Vec<f64>>,
    pub mean_tau_hat: Option<f64>,
    pub c_u_hat: Option<Vec<f64>>,
    pub c_u_centered: Option<Vec<f64>>,
    pub c_hat_u_hat: Option<Vec<f64>>,
    pub first_block_m2: Option<Vec<f64>>,
    pub first_block_m3: Option<Vec<f64>>,
    pub bootstrap_resamples: Option<usize>,
    pub se_v_hat: Option<Vec<f64>>,
    pub se_mean_tau_hat: Option<f64>,
    pub se_c_u_hat: Option<Vec<f64>>,
    pub se_c_hat_u_hat: Option<Vec<f64>>,
    pub lyapunov_epsilon: f64,
    pub lyapunov_profile: Vec<LyapunovPoint>,
    pub tail_diagnostic: Option<TailReport>,
    /// Lag-1 and lag-2 autocorrelation of `Z^u`, per direction.
    pub autocorrelation_lag1: Option<Vec<f64>>,
    pub autocorrelation_lag2: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub software: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub seeds: Vec<ReplicaSeeds>,
    pub status: &'static str,
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub wall_time_seconds: f64,
}

/// Curves and envelopes for one direction of `u_list`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionCurves {
    pub u: Vec<f64>,
    pub constants: LilConstants,
    /// `(replica, curve)` in replica order; replicas whose curve could not be
    /// evaluated are left out and reported as warnings.
    pub curves: Vec<(usize, LilCurve)>,
    pub report: ErrorTermReport,
}

/// Everything a run produced, before it is written out.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub seeds: Vec<ReplicaSeeds>,
    pub summary: Option<EstimateSummary>,
    pub estimates: Option<EstimatesFile>,
    pub lil: Vec<DirectionCurves>,
    pub checkpoints: Vec<usize>,
    pub warnings: Vec<String>,
    pub insufficient: bool,
}

fn lyapunov_k_list(n_blocks: u64) -> Vec<u64> {
    let mut ks = vec![10u64];
    while ks[ks.len() - 1] * 10 <= n_blocks {
        let next = ks[ks.len() - 1] * 10;
        ks.push(next);
    }
    ks
}

fn estimates_file(
    cfg: &ExperimentConfig,
    merged: &BlockMoments,
    outcomes: &[ReplicaOutcome],
    summary: Option<&EstimateSummary>,
    failure: Option<String>,
    warnings: &mut Vec<String>,
) -> Result<EstimatesFile> {
    let regenerations = outcomes.iter().map(|o| o.regenerations).sum();
    let backtracks = outcomes.iter().map(|o| o.backtracks).sum();
    let mut f = EstimatesFile {
        status: if summary.is_some() { "ok" } else { "insufficient_regenerations" },
        message: failure,
        ell: cfg.ell.clone(),
        u_list: cfg.u_list.clone(),
        guard: cfg.guard,
        horizon: cfg.horizon,
        replicas: cfg.replicas,
        n_blocks: merged.n_blocks(),
        n_first_blocks: merged.n_first_blocks(),
        regenerations,
        backtracks,
        v_hat: None,
        v_used: None,
        mean_tau_hat: None,
        c_u_hat: None,
        c_u_centered: None,
        c_hat_u_hat: None,
        first_block_m2: None,
        first_block_m3: None,
        bootstrap_resamples: None,
        se_v_hat: None,
        se_mean_tau_hat: None,
        se_c_u_hat: None,
        se_c_hat_u_hat: None,
        lyapunov_epsilon: cfg.lyapunov_epsilon,
        lyapunov_profile: Vec::new(),
        tail_diagnostic: None,
        autocorrelation_lag1: None,
        autocorrelation_lag2: None,
        warnings: Vec::new(),
    };
    let Some(s) = summary else {
        return Ok(f);
    };
    let v_used = cfg.external_velocity.clone().unwrap_or_else(|| s.v_hat.clone());
    let per_dir = |g: &dyn Fn(&rwre_core::statistics::DirectionEstimate) -> f64| Some(s.directions.iter().map(g).collect());
    f.v_hat = Some(s.v_hat.clone());
    f.v_used = Some(v_used.clone());
    f.mean_tau_hat = Some(s.mean_tau_hat);
    f.c_u_hat = per_dir(&|d| d.c_u_hat);
    f.c_u_centered = per_dir(&|d| d.c_u_centered);
    f.c_hat_u_hat = per_dir(&|d| d.c_hat_u_hat);
    f.first_block_m2 = per_dir(&|d| d.first_m2);
    f.first_block_m3 = per_dir(&|d| d.first_m3);
    for k in lyapunov_k_list(s.n_blocks) {
        let ratio = s
            .directions
            .iter()
            .map(|d| lyapunov_profile(d, &[k], cfg.lyapunov_epsilon).ok().map(|v| v[0]))
            .collect();
        f.lyapunov_profile.push(LyapunovPoint { k, ratio });
    }

    if cfg.retain_blocks {
        let blocks: Vec<RegenSample> = outcomes.iter().flat_map(|o| o.blocks.iter().cloned()).collect();
        if cfg.bootstrap_resamples >= 2 {
            let se = bootstrap_standard_errors(&blocks, &cfg.u_list, cfg.bootstrap_resamples, cfg.bootstrap_seed())?;
            f.bootstrap_resamples = Some(se.resamples);
            f.se_v_hat = Some(se.v_hat);
            f.se_mean_tau_hat = Some(se.mean_tau_hat);
            f.se_c_u_hat = Some(se.c_u_hat);
            f.se_c_hat_u_hat = Some(se.c_hat_u_hat);
        }
        let tail_cfg = TailDiagnosticConfig::new(cfg.gamma, cfg.c)?;
        let tail = tail_diagnostic(&blocks, tail_cfg);
        if tail.unstable {
            warnings.push(format!(
                "tail diagnostic unstable: the top 1% of blocks carry {:.1}% of E[exp(c X*^gamma)]",
                100.0 * tail.top_share
            ));
        }
        f.tail_diagnostic = Some(TailReport::new(tail_cfg, tail));
        let mut lag1 = Vec::new();
        let mut lag2 = Vec::new();
        for u in &cfg.u_list {
            let z = z_values(&blocks, &v_used, u);
            match (independence_diagnostic(&z, 1), independence_diagnostic(&z, 2)) {
                (Ok(a), Ok(b)) => {
                    lag1.push(a);
                    lag2.push(b);
                }
                _ => {
                    warnings.push("autocorrelation not available (too few or constant increments)".into());
                    lag1.clear();
                    lag2.clear();
                    break;
                }
            }
        }
        if lag1.len() == cfg.u_list.len() {
            f.autocorrelation_lag1 = Some(lag1);
            f.autocorrelation_lag2 = Some(lag2);
        }
    } else {
        warnings.push("blocks not retained: bootstrap, tail and independence diagnostics skipped".into());
    }
    Ok(f)
}

fn lil_curves(
    cfg: &ExperimentConfig,
    summary: &EstimateSummary,
    outcomes: &[ReplicaOutcome],
    warnings: &mut Vec<String>,
) -> Vec<DirectionCurves> {
    let v = cfg.external_velocity.clone().unwrap_or_else(|| summary.v_hat.clone());
    let mut out = Vec::new();
    for (j, u) in cfg.u_list.iter().enumerate() {
        let constants = LilConstants::new(v.clone(), summary.directions[j].c_u_hat, summary.mean_tau_hat);
        let mut curves = Vec::with_capacity(outcomes.len());
        let mut skipped = 0usize;
        let mut first_error = None;
        for o in outcomes {
            match LilCurve::from_checkpoints(&o.checkpoints, &constants, u) {
                Ok(c) => curves.push((o.seeds.replica, c)),
                Err(e) => {
                    skipped += 1;
                    first_error.get_or_insert(e);
                }
            }
        }
        if let Some(e) = first_error {
            warnings.push(format!("u_list[{j}]: {skipped} replica curves skipped ({e})"));
        }
        let plain: Vec<LilCurve> = curves.iter().map(|(_, c)| c.clone()).collect();
        let report = error_term_report(&plain);
        out.push(DirectionCurves { u: u.clone(), constants, curves, report });
    }
    out
}

/// Runs the configured pipeline in memory. Trajectory files, if requested,
/// are written to `cfg.output_dir` while the replicas run.
pub fn run(cfg: &ExperimentConfig, stages: Stages) -> Result<RunResult> {
    let model = cfg.validate()?;
    let mut warnings = Vec::new();
    if !model.within_theorem_hypothesis() {
        warnings.push("dimension 1 is outside the theorem's d > 1 hypothesis (debug mode)".into());
    }
    if cfg.horizon == 0 {
        warnings.push("horizon 0: degenerate run with a single-point trajectory".into());
    }
    let (checkpoints, dropped) = if stages.lil { feasible_checkpoints(cfg) } else { (Vec::new(), Vec::new()) };
    if !dropped.is_empty() {
        warnings.push(format!("checkpoints {dropped:?} dropped: they need e^2 < n <= horizon - guard"));
    }
    if stages.trajectories {
        std::fs::create_dir_all(&cfg.output_dir).map_err(|e| LabError::io(&cfg.output_dir, e))?;
    }
    let traj_dir = stages.trajectories.then_some(cfg.output_dir.as_path());
    let outcomes = run_replicas(cfg, &model, &checkpoints, traj_dir)?;

    let mut merged = BlockMoments::new(model.dimension, &cfg.u_list)?;
    for o in &outcomes {
        merged.merge(&o.moments);
    }
    let summary = match &cfg.external_velocity {
        Some(v) => merged.summarize_with(v),
        None => merged.summarize(),
    };
    let (summary, failure) = match summary {
        Ok(s) => (Some(s), None),
        Err(e @ rwre_core::Error::InsufficientRegenerations(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let insufficient = summary.is_none();
    if let Some(msg) = &failure {
        warnings.push(format!("InsufficientRegenerations: {msg}"));
    }
    if let Some(s) = &summary {
        warnings.extend(s.warnings(&cfg.ell).into_iter().map(String::from));
    }

    let estimates = if stages.estimates || stages.lil {
        Some(estimates_file(cfg, &merged, &outcomes, summary.as_ref(), failure, &mut warnings)?)
    } else {
        None
    };
    let lil = match (&summary, stages.lil) {
        (Some(s), true) if !checkpoints.is_empty() => lil_curves(cfg, s, &outcomes, &mut warnings),
        (_, true) => {
            warnings.push("LIL curves skipped: no constants or no feasible checkpoints".into());
            Vec::new()
        }
        _ => Vec::new(),
    };
    let estimates = estimates.map(|mut e| {
        e.warnings = warnings.clone();
        e
    });
    Ok(RunResult {
        seeds: outcomes.iter().map(|o| o.seeds).collect(),
        summary,
        estimates,
        lil,
        checkpoints,
        warnings,
        insufficient,
    })
}

fn lil_file_names(j: usize) -> (String, String) {
    if j == 0 {
        ("lil_curve.csv".into(), "lil_envelope.csv".into())
    } else {
        (format!("lil_curve_u{j}.csv"), format!("lil_envelope_u{j}.csv"))
    }
}

#[derive(Serialize)]
struct LilReportEntry<'a> {
    u: &'a [f64],
    v: &'a [f64],
    c_u: f64,
    mean_tau: f64,
    curves: usize,
    t2_max_monotone: bool,
    t3_max_monotone: bool,
    t2_q99_decays: bool,
    t3_q99_decays: bool,
    rows: Vec<LilReportRow>,
}

#[derive(Serialize)]
struct LilReportRow {
    n: usize,
    max_abs_t2: f64,
    q50_abs_t2: f64,
    q90_abs_t2: f64,
    q99_abs_t2: f64,
    max_abs_t3: f64,
    q50_abs_t3: f64,
    q90_abs_t3: f64,
    q99_abs_t3: f64,
    stat_max: f64,
    stat_min: f64,
    max_identity_residual: f64,
}

impl RunResult {
    /// Writes `estimates.json`, the LIL files and `lil_report.json` into
    /// `dir`, returning the file names in write order.
    pub fn write(&self, dir: &Path) -> Result<Vec<String>> {
        std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        let mut files = Vec::new();
        if let Some(e) = &self.estimates {
            io::write_json(&dir.join("estimates.json"), e)?;
            files.push("estimates.json".to_string());
        }
        if self.lil.is_empty() {
            return Ok(files);
        }
        let mut report = Vec::new();
        for (j, dc) in self.lil.iter().enumerate() {
            let (curve_name, env_name) = lil_file_names(j);
            let p = dir.join(&curve_name);
            io::write_lil_curves(io::create(&p)?, &dc.curves)?;
            let p = dir.join(&env_name);
            io::write_lil_envelope(io::create(&p)?, &dc.report)?;
            files.push(curve_name);
            files.push(env_name);
            let rows = dc
                .report
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| LilReportRow {
                    n: r.n,
                    max_abs_t2: r.max_abs_t2,
                    q50_abs_t2: r.q50_abs_t2,
                    q90_abs_t2: r.q90_abs_t2,
                    q99_abs_t2: r.q99_abs_t2,
                    max_abs_t3: r.max_abs_t3,
                    q50_abs_t3: r.q50_abs_t3,
                    q90_abs_t3: r.q90_abs_t3,
                    q99_abs_t3: r.q99_abs_t3,
                    stat_max: r.stat_max,
                    stat_min: r.stat_min,
                    max_identity_residual: dc
                        .curves
                        .iter()
                        .map(|(_, c)| {
                            rwre_core::lil::Decomposition {
                                statistic: c.statistic[i],
                                main: c.term_main[i],
                                term2: c.term2[i],
                                term3: c.term3[i],
                            }
                            .identity_residual()
                        })
                        .fold(0.0, f64::max),
                })
                .collect();
            report.push(LilReportEntry {
                u: &dc.u,
                v: &dc.constants.v,
                c_u: dc.constants.c_u,
                mean_tau: dc.constants.mean_tau,
                curves: dc.curves.len(),
                t2_max_monotone: dc.report.t2_max_monotone,
                t3_max_monotone: dc.report.t3_max_monotone,
                t2_q99_decays: dc.report.t2_q99_decays,
                t3_q99_decays: dc.report.t3_q99_decays,
                rows,
            });
        }
        io::write_json(&dir.join("lil_report.json"), &report)?;
        files.push("lil_report.json".into());
        Ok(files)
    }
}

/// Runs `cfg`, writes every product plus `manifest.json` into
/// `cfg.output_dir`, and returns the manifest.
///
/// A run without enough regenerations still succeeds; the manifest status is
/// then `insufficient_regenerations` and the reason is listed in `warnings`.
pub fn run_experiment(cfg: &ExperimentConfig, stages: Stages) -> Result<RunManifest> {
    let clock = Instant::now();
    let result = run(cfg, stages)?;
    let mut files = Vec::new();
    if stages.trajectories {
        for s in &result.seeds {
            files.push(format!("trajectory_{:05}.csv", s.replica));
            files.push(format!("regenerations_{:05}.csv", s.replica));
        }
    }
    files.extend(result.write(&cfg.output_dir)?);
    files.push("manifest.json".into());
    let manifest = RunManifest {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        seeds: result.seeds.clone(),
        status: if result.insufficient { "insufficient_regenerations" } else { "ok" },
        files,
        warnings: result.warnings.clone(),
        wall_time_seconds: clock.elapsed().as_secs_f64(),
    };
    io::write_json(&cfg.output_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Regeneration report of an externally supplied trajectory file.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeReport {
    pub trajectory: Trajectory,
    pub regenerations: RegenerationSequence,
    pub blocks: Vec<RegenSample>,
}

impl AnalyzeReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        io::write_regeneration_report(out, self.trajectory.dimension(), &self.blocks)
    }
}

/// Detection and block extraction on a trajectory CSV.
///
/// With a single confirmed regeneration the report holds just the first
/// block; with none it is empty.
pub fn analyze_file(path: &Path, ell: &[f64], guard: usize) -> Result<AnalyzeReport> {
    let t = io::read_trajectory_file(path)?;
    analyze_trajectory(t, ell, guard)
}

pub fn analyze_trajectory(t: Trajectory, ell: &[f64], guard: usize) -> Result<AnalyzeReport> {
    rwre_core::check_unit(ell)?;
    if ell.len() != t.dimension() {
        return Err(rwre_core::Error::DimensionMismatch { expected: t.dimension(), got: ell.len() }.into());
    }
    let regenerations = detect(&t, ell, guard)?;
    let blocks = match regenerations.len() {
        0 => Vec::new(),
        1 => vec![block_between(&t, 0, regenerations.times[0], 1)],
        _ => extract_samples(&t, &regenerations, ell)?,
    };
    Ok(AnalyzeReport { trajectory: t, regenerations, blocks })
}
