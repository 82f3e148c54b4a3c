use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn robreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robreg"))
        .args(args)
        .output()
        .expect("spawn robreg")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

const PROBLEM: &str = r#"{
  "domain_size": 4,
  "samples": [[0, 0.3], [1, 0.31], [2, 0.31], [3, 0.3]],
  "perturbations": {"0": [0, 1], "1": [0, 1, 2], "2": [1, 2, 3], "3": [2, 3]},
  "class_matrix": [
    [0.3, 0.31, 0.31, 0.3],
    [0.3, 0.3, 0.6, 0.6],
    [0.0, 0.5, 1.0, 0.5],
    [0.5, 0.5, 0.5, 0.5]
  ],
  "holdout": [[0, 0.3], [2, 0.31]]
}"#;

const EXPERIMENT: &str = r#"{
  "class": {"kind": "random_walk", "domain_size": 20, "rows": 16, "step": 0.01},
  "perturbation": {"kind": "grid_ball", "radius": 1},
  "target": {"member": 5},
  "pipeline": {"kind": "improper", "eta": 0.2},
  "m_grid": [10, 20],
  "trials": 2,
  "holdout": 50,
  "seed": 4
}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn fatdim_writes_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", PROBLEM);
    let out = robreg(&["fatdim", "--config", &cfg, "--gamma", "0.1,0.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,fat,dual_fat"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn nonpositive_gamma_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", PROBLEM);
    assert_eq!(
        robreg(&["fatdim", "--config", &cfg, "--gamma", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        robreg(&["fatdim", "--config", &cfg, "--gamma=-0.5"]).status.code(),
        Some(1)
    );
}

#[test]
fn unknown_subcommand_and_missing_config() {
    assert_eq!(robreg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(robreg(&["learn-improper", "--eta", "0.2"]).status.code(), Some(1));
    assert_eq!(robreg(&["--help"]).status.code(), Some(0));
}

#[test]
fn experiment_writes_file_deterministically() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "e.json", EXPERIMENT);
    let a = path(&dir, "runs.csv");
    let b = path(&dir, "again.csv");
    for out in [&a, &b] {
        let o = robreg(&["experiment", "--config", &cfg, "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.lines().skip(1).all(|l| l.contains(",ok")), "{text}");
}

#[test]
fn learners_emit_json_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", PROBLEM);
    for args in [
        vec!["learn-improper", "--eta", "0.2"],
        vec!["learn-proper", "--eta", "0.2", "--epsilon", "0.2"],
        vec!["agnostic-eta", "--eta", "0.2"],
        vec!["regress", "--epsilon", "0.2", "--p", "2"],
    ] {
        let mut full = args.clone();
        full.extend(["--config", &cfg, "--seed", "7"]);
        let o = robreg(&full);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v.is_object(), "{args:?}");
        assert_eq!(robreg(&full).stdout, o.stdout, "{args:?} not deterministic");
    }
}

#[test]
fn reports_append_to_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", PROBLEM);
    let out = path(&dir, "reports.csv");
    for seed in ["1", "2"] {
        let o = robreg(&[
            "learn-improper",
            "--eta",
            "0.2",
            "--config",
            &cfg,
            "--seed",
            seed,
            "--out",
            &out,
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn constants_flag_and_class_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", PROBLEM);
    let o = robreg(&["learn-improper", "--eta", "0.3", "--constants", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = write(&dir, "class.csv", "3,2,1,0\n0.3,0.31,0.31,0.3\n0.9,0.1,0.9,0.1\n");
    let o = robreg(&["cover", "--t", "0.1", "--class", &csv, "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("point,z,y,origin,center\n"));
}

#[test]
fn gen_round_trips_into_learner() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "e.json", EXPERIMENT);
    let problem = path(&dir, "p.json");
    assert_eq!(
        robreg(&["gen", "--config", &cfg, "--m", "12", "--out", &problem])
            .status
            .code(),
        Some(0)
    );
    assert!(Path::new(&problem).exists());
    let o = robreg(&["learn-improper", "--eta", "0.2", "--config", &problem]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn agnostic_regress_needs_holdout() {
    let dir = TempDir::new().unwrap();
    let small = write(&dir, "c.json", PROBLEM);
    let args = ["agnostic-regress", "--epsilon", "0.3", "--delta", "0.1", "--config"];
    let mut full = args.to_vec();
    full.push(&small);
    assert_eq!(robreg(&full).status.code(), Some(1));

    let cfg = write(&dir, "e.json", EXPERIMENT);
    let problem = path(&dir, "p.json");
    assert_eq!(
        robreg(&["gen", "--config", &cfg, "--m", "20", "--out", &problem])
            .status
            .code(),
        Some(0)
    );
    let mut full = args.to_vec();
    full.push(&problem);
    let o = robreg(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["holdout_eta_err"].is_number(), "{v}");
}

#[test]
fn bounds_table() {
    let o = robreg(&["bounds", "--k", "5", "--m", "1000", "--delta", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let names: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["realizable", "agnostic", "bernstein"]);
    let o = robreg(&["bounds", "--theorem", "improper", "--fat", "3", "--fat-star", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let coded = robreg(&["bounds", "--theorem", "4.1", "--fat", "3", "--fat-star", "2"]);
    assert_eq!(
        o.stdout.rsplit(|&b| b == b',').next(),
        coded.stdout.rsplit(|&b| b == b',').next()
    );
    assert_eq!(robreg(&["bounds"]).status.code(), Some(1));
    assert_eq!(robreg(&["bounds", "--theorem", "9.9"]).status.code(), Some(1));
}
