use std::path::Path;
use std::process::{Command, Output};

fn rwre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwre")).args(args).output().expect("run rwre")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn simulate_with_preset_writes_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = rwre(&[
        "simulate", "--preset", "drifted-mixture", "--horizon", "500", "--guard", "50", "--replicas", "2", "-o", out,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = std::fs::read_to_string(dir.path().join("trajectory_00001.csv")).unwrap();
    assert!(t.starts_with("step,x1,x2,proj\n0,0,0,0\n"));
    assert_eq!(t.lines().count(), 502);
    let r = std::fs::read_to_string(dir.path().join("regenerations_00000.csv")).unwrap();
    assert!(r.starts_with("k,tau_k,delta_tau,dx1,dx2,block_sup\n1,"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn estimate_from_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = format!(
        r#"{{
  "model": {{ "dimension": 2, "kappa": 0.1,
             "variant": {{ "PointMass": {{ "base": [0.4, 0.1, 0.25, 0.25] }} }},
             "env_seed": 1 }},
  "ell": [1, 0],
  "u_list": [[1, 0], [0, 1]],
  "horizon": 100000,
  "replicas": 1,
  "master_seed": 9,
  "output_dir": {:?}
}}"#,
        out.to_str().unwrap()
    );
    let path = write(dir.path(), "cfg.json", &cfg);
    let o = rwre(&["estimate", "--config", &path, "--horizon", "20000", "--bootstrap-resamples", "20"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let est: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("estimates.json")).unwrap()).unwrap();
    assert_eq!(est["horizon"], 20000);
    let v = est["v_hat"][0].as_f64().unwrap();
    assert!((v - 0.3).abs() < 0.03, "{v}");
    assert_eq!(est["se_c_u_hat"].as_array().unwrap().len(), 2);
}

#[test]
fn lil_subcommand_writes_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = rwre(&[
        "lil", "--preset", "drifted-random", "--horizon", "5096", "--replicas", "2", "--min-exp", "8", "--max-exp", "12",
        "--u", "1,0", "--u", "-1,0", "--no-retain-blocks", "-o", out,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let a = std::fs::read_to_string(dir.path().join("lil_curve.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("lil_curve_u1.csv")).unwrap();
    assert_eq!(a.lines().count(), 1 + 2 * 5);
    for (x, y) in a.lines().skip(1).zip(b.lines().skip(1)) {
        let x: Vec<f64> = x.split(',').skip(2).map(|s| s.parse().unwrap()).collect();
        let y: Vec<f64> = y.split(',').skip(2).map(|s| s.parse().unwrap()).collect();
        assert!(x.iter().zip(&y).all(|(p, q)| *p == -*q));
    }
}

#[test]
fn degenerate_run_exits_zero_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = rwre(&["estimate", "--preset", "drifted-random", "--horizon", "0", "-o", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("InsufficientRegenerations"));
}

#[test]
fn analyze_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("step,x1,x2,proj\n");
    for (k, x) in [0, 1, 0, 1, 2, 3, 4, 5].iter().enumerate() {
        text.push_str(&format!("{k},{x},0,{x}\n"));
    }
    let path = write(dir.path(), "t.csv", &text);
    let o = rwre(&["analyze", &path, "--ell", "1,0", "--guard", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "k,tau_k,delta_tau,dx1,dx2,block_sup\n1,4,4,2,0,2\n");
}

#[test]
fn parse_and_config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    let o = rwre(&["analyze", &empty, "--ell", "1,0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("parse error at line 1"));

    let jump = write(dir.path(), "jump.csv", "step,x1,x2,proj\n0,0,0,0\n1,2,0,2\n");
    let o = rwre(&["analyze", &jump, "--ell", "1,0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("row 1"), "{}", stderr(&o));

    let bad = write(dir.path(), "bad.json", "{ \"ell\": [1, 0], ");
    assert_eq!(code(&rwre(&["estimate", "--config", &bad])), 1);
    assert_eq!(code(&rwre(&["estimate", "--preset", "drifted-random", "--horizon", "100"])), 1);
    assert_eq!(code(&rwre(&["estimate", "--preset", "nope", "--horizon", "5000"])), 1);
    assert_eq!(code(&rwre(&["estimate", "--preset", "drifted-random", "--horizon", "5000", "--ell", "1,1"])), 1);
    assert_eq!(code(&rwre(&["estimate", "--bogus-flag"])), 1);
}

#[test]
fn verify_subset_passes() {
    let o = rwre(&["verify", "--only", "2,9"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("[PASS] #2"));
    assert!(stdout.contains("[PASS] #9"));
}
