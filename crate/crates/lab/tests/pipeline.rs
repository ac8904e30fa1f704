use rwre_core::statistics::{estimate_mean_tau, lyapunov_profile, tail_diagnostic, TailDiagnosticConfig};
use rwre_lab::config::{CheckpointRange, ExperimentConfig, ModelSpec};
use rwre_lab::harness::{self, Stages};
use rwre_core::RegenSample;

fn config(preset: &str, horizon: usize, replicas: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ModelSpec::preset(preset).unwrap(), vec![1.0, 0.0], horizon);
    cfg.replicas = replicas;
    cfg.master_seed = 42;
    cfg
}

fn retained_blocks(cfg: &ExperimentConfig) -> Vec<RegenSample> {
    let model = cfg.validate().unwrap();
    harness::run_replicas(cfg, &model, &[], None).unwrap().into_iter().flat_map(|o| o.blocks).collect()
}

fn read_json(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn degenerate_run_succeeds_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("drifted-random", 0, 1);
    cfg.output_dir = dir.path().to_path_buf();
    let manifest = harness::run_experiment(&cfg, Stages { trajectories: true, estimates: true, lil: true }).unwrap();
    assert_eq!(manifest.status, "insufficient_regenerations");
    assert!(manifest.warnings.iter().any(|w| w.contains("InsufficientRegenerations")));
    let traj = std::fs::read_to_string(dir.path().join("trajectory_00000.csv")).unwrap();
    assert_eq!(traj, "step,x1,x2,proj\n0,0,0,0\n");
    let est = read_json(&dir.path().join("estimates.json"));
    assert_eq!(est["status"], "insufficient_regenerations");
    assert!(est["v_hat"].is_null() && est["c_u_hat"].is_null());
    assert_eq!(est["n_blocks"], 0);
    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["seeds"].as_array().unwrap().len(), 1);
}

#[test]
fn estimates_file_has_fixed_field_names() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("drifted-point-mass", 20_000, 2);
    cfg.u_list = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    cfg.bootstrap_resamples = 50;
    cfg.output_dir = dir.path().to_path_buf();
    harness::run_experiment(&cfg, Stages::ESTIMATE).unwrap();
    let est = read_json(&dir.path().join("estimates.json"));
    for key in [
        "v_hat",
        "mean_tau_hat",
        "c_u_hat",
        "c_hat_u_hat",
        "n_blocks",
        "se_v_hat",
        "se_mean_tau_hat",
        "se_c_u_hat",
        "se_c_hat_u_hat",
        "guard",
    ] {
        assert!(!est[key].is_null(), "{key} missing");
    }
    assert_eq!(est["status"], "ok");
    assert_eq!(est["c_u_hat"].as_array().unwrap().len(), 2);
    assert_eq!(est["guard"], 1000);
    assert!(est["n_blocks"].as_u64().unwrap() > 1000);
    assert!(!dir.path().join("lil_curve.csv").exists());
}

#[test]
fn lil_files_have_documented_headers() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("drifted-mixture", 5000, 3);
    cfg.u_list = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
    cfg.checkpoints = CheckpointRange { min_exp: 8, max_exp: 14 };
    cfg.output_dir = dir.path().to_path_buf();
    let m = harness::run_experiment(&cfg, Stages::ALL).unwrap();
    // 2^12 and above exceed horizon - guard.
    assert!(m.warnings.iter().any(|w| w.contains("dropped")));
    let curve = std::fs::read_to_string(dir.path().join("lil_curve.csv")).unwrap();
    let mut lines = curve.lines();
    assert_eq!(lines.next(), Some("replica,n,statistic,term_main,term2,term3"));
    assert_eq!(lines.count(), 3 * 4);
    let env = std::fs::read_to_string(dir.path().join("lil_envelope_u1.csv")).unwrap();
    assert!(env.starts_with("n,stat_max,stat_min,q99_abs_t2,q99_abs_t3\n256,"));
    assert_eq!(env.lines().count(), 5);
}

#[test]
fn repeated_runs_are_identical_and_workers_do_not_matter() {
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, workers) in dirs.iter().zip([1, 3]) {
        let mut cfg = config("drifted-random", 6000, 5);
        cfg.u_list = vec![vec![1.0, 0.0], vec![0.6, 0.8]];
        cfg.checkpoints = CheckpointRange { min_exp: 6, max_exp: 12 };
        cfg.output_dir = d.path().to_path_buf();
        cfg.workers = Some(workers);
        harness::run_experiment(&cfg, Stages { trajectories: true, estimates: true, lil: true }).unwrap();
    }
    let n = rwre_lab::acceptance::compare_dirs(dirs[0].path(), dirs[1].path()).unwrap();
    assert_eq!(n, 5 * 2 + 1 + 4 + 1);
}

#[test]
fn fixed_env_reuses_one_environment() {
    let mut cfg = config("drifted-random", 2000, 3);
    cfg.fixed_env = true;
    cfg.model.env_seed = 17;
    let r = harness::run(&cfg, Stages::ESTIMATE).unwrap();
    assert!(r.seeds.iter().all(|s| s.env_seed == 17));
    let walks: std::collections::HashSet<u64> = r.seeds.iter().map(|s| s.walk_seed).collect();
    assert_eq!(walks.len(), 3);
}

#[test]
fn external_velocity_changes_only_the_centering() {
    let mut cfg = config("drifted-point-mass", 20_000, 2);
    cfg.bootstrap_resamples = 0;
    let plug = harness::run(&cfg, Stages::ESTIMATE).unwrap().summary.unwrap();
    cfg.external_velocity = Some(vec![0.3, 0.0]);
    let ext = harness::run(&cfg, Stages::ESTIMATE).unwrap();
    let s = ext.summary.unwrap();
    assert_eq!(s.v_hat, plug.v_hat);
    assert_eq!(ext.estimates.unwrap().v_used, Some(vec![0.3, 0.0]));
    let (a, b) = (s.directions[0].c_u_hat, plug.directions[0].c_u_hat);
    assert!(a != b && (a - b).abs() < 0.05 * b, "{a} vs {b}");
}

#[test]
fn mean_tau_halves_agree() {
    let blocks = retained_blocks(&config("drifted-random", 60_000, 4));
    let non_first: Vec<RegenSample> = blocks.into_iter().filter(|b| !b.first_block).collect();
    let (a, b) = non_first.split_at(non_first.len() / 2);
    let (a, b) = (estimate_mean_tau(a).unwrap(), estimate_mean_tau(b).unwrap());
    let combined = (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt();
    assert!((a.mean - b.mean).abs() <= 3.0 * combined, "{a:?} vs {b:?}");
}

#[test]
fn tail_diagnostic_is_stable_across_halves() {
    let blocks = retained_blocks(&config("drifted-random", 60_000, 4));
    let non_first: Vec<RegenSample> = blocks.into_iter().filter(|b| !b.first_block).collect();
    let (a, b) = non_first.split_at(non_first.len() / 2);
    let cfg = TailDiagnosticConfig::new(0.5, 0.1).unwrap();
    let (ta, tb) = (tail_diagnostic(a, cfg), tail_diagnostic(b, cfg));
    assert!(!ta.unstable && !tb.unstable);
    assert!((ta.mean - tb.mean).abs() <= 0.2 * ta.mean.min(tb.mean), "{ta:?} vs {tb:?}");
}

#[test]
fn lyapunov_ratio_decreases() {
    let mut cfg = config("drifted-random", 60_000, 4);
    cfg.bootstrap_resamples = 0;
    let s = harness::run(&cfg, Stages::ESTIMATE).unwrap().summary.unwrap();
    let r = lyapunov_profile(&s.directions[0], &[100, 1000, 10_000, 100_000], 0.5).unwrap();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
}

#[test]
fn analyze_hand_traced_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let mut text = String::from("step,x1,x2,proj\n");
    for (k, x) in [0, 1, 0, 1, 2, 3, 4, 5].iter().enumerate() {
        text.push_str(&format!("{k},{x},0,{x}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let report = harness::analyze_file(&path, &[1.0, 0.0], 3).unwrap();
    assert_eq!(report.regenerations.times, vec![4]);
    let mut out = Vec::new();
    report.write_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "k,tau_k,delta_tau,dx1,dx2,block_sup\n1,4,4,2,0,2\n");
}

#[test]
fn analyze_round_trips_simulated_paths() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("drifted-random", 3000, 2);
    cfg.ell = vec![0.8, 0.6];
    cfg.u_list = vec![cfg.ell.clone()];
    cfg.guard = 200;
    cfg.output_dir = dir.path().to_path_buf();
    harness::run_experiment(&cfg, Stages::SIMULATE).unwrap();
    for i in 0..2 {
        let report = harness::analyze_file(&dir.path().join(format!("trajectory_{i:05}.csv")), &cfg.ell, cfg.guard).unwrap();
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        let written = std::fs::read(dir.path().join(format!("regenerations_{i:05}.csv"))).unwrap();
        assert_eq!(out, written);
    }
}

#[test]
fn analyze_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert!(matches!(harness::analyze_file(&empty, &[1.0, 0.0], 3), Err(rwre_lab::LabError::Parse { .. })));
    let jump = dir.path().join("jump.csv");
    std::fs::write(&jump, "step,x1,x2,proj\n0,0,0,0\n1,1,0,1\n2,1,1,1\n3,2,2,2\n").unwrap();
    match harness::analyze_file(&jump, &[1.0, 0.0], 3) {
        Err(rwre_lab::LabError::Parse { line, message, .. }) => {
            assert_eq!(line, 5);
            assert!(message.contains("row 3"));
        }
        other => panic!("{other:?}"),
    }
    let ok = dir.path().join("ok.csv");
    std::fs::write(&ok, "step,x1,x2,proj\n0,0,0,0\n1,1,0,1\n").unwrap();
    assert!(matches!(
        harness::analyze_file(&ok, &[1.0, 1.0], 3),
        Err(rwre_lab::LabError::Core(rwre_core::Error::NotUnitVector { .. }))
    ));
}
