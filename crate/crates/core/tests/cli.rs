use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cho_core::cli::output::{read_csv, sha256_hex};
use serde_json::Value;

fn cho(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cho"))
        .args(args)
        .env("CHO_OUTPUT_ROOT", root)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn error_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().rfind(|l| l.starts_with('{')).expect("error json on stderr");
    serde_json::from_str(line).unwrap()
}

const SMALL_MARGINALS: &str = r#"{
  "name": "small-marginals",
  "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
  "run": {"mode": "marginals", "t_samples": 5, "x_samples": 21, "quadrature_order": 32}
}"#;

#[test]
fn marginals_run_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "m.json", SMALL_MARGINALS);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = cho(&["marginals", "--config", &cfg, "--out", dir.to_str().unwrap()], tmp.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["marginal_x1.csv", "marginal_x2.csv", "scenario.json"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }

    let m = manifest(&a);
    assert_eq!(m["partial"], false);
    assert!(m["tail_bound"].as_f64().unwrap() < 1e-6);
    assert!((m["frequencies"]["delta_omega"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    for art in m["artifacts"].as_array().unwrap() {
        let bytes = fs::read(a.join(art["path"].as_str().unwrap())).unwrap();
        assert_eq!(art["sha256"].as_str().unwrap(), sha256_hex(&bytes));
        assert_eq!(art["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }

    let (header, rows) = read_csv(&fs::read(a.join("marginal_x1.csv")).unwrap()).unwrap();
    assert_eq!(header, ["t", "x", "closed_form", "quadrature"]);
    assert_eq!(rows.len(), 5 * 21);
    assert!(rows.windows(2).all(|w| (w[0][0], w[0][1]) < (w[1][0], w[1][1])));
    // closed form and exact series agree to second order in the beat ratio
    let peak = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
    assert!(rows.iter().all(|r| (r[2] - r[3]).abs() < 4.0 * 0.01 * peak));
}

#[test]
fn output_root_override_and_trajectory_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.json",
        r#"{"name": "traj", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
            "run": {"mode": "trajectory", "x0": [0.0, -1.0], "samples": 11}}"#,
    );
    let out = cho(&["trajectory", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let dir = tmp.path().join("traj");
    let (header, rows) = read_csv(&fs::read(dir.join("trajectory.csv")).unwrap()).unwrap();
    assert_eq!(header, ["t", "x1", "x2", "e1", "e2", "q"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(&rows[0][..3], &[0.0, 0.0, -1.0]);
    // reduced energies always sum to 2ħω̄
    assert!(rows.iter().all(|r| (r[3] + r[4] - 20.0).abs() < 1e-9));
    assert!(manifest(&dir)["integrator"]["accepted"].as_u64().unwrap() > 0);
}

#[test]
fn ensemble_independent_of_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "e.json",
        r#"{"name": "ens", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
            "run": {"mode": "ensemble", "count": 200, "seed": 3, "times": [0, 5, 10], "exact_reference": false}}"#,
    );
    let mut files = Vec::new();
    for workers in ["1", "3"] {
        let dir = tmp.path().join(format!("w{workers}"));
        let out = cho(&["ensemble", "--config", &cfg, "--out", dir.to_str().unwrap(), "--workers", workers], tmp.path());
        assert_eq!(out.status.code(), Some(0));
        files.push((fs::read(dir.join("ensemble.csv")).unwrap(), fs::read(dir.join("ks.csv")).unwrap()));
        assert_eq!(manifest(&dir)["seed"], 3);
    }
    assert_eq!(files[0], files[1]);
    let (header, rows) = read_csv(&files[0].0).unwrap();
    assert_eq!(header, ["trajectory", "t", "x1", "x2"]);
    assert_eq!(rows.len(), 600);
}

#[test]
fn validate_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "v.json",
        r#"{"name": "v", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
            "run": {"mode": "validate", "criteria": [1, 2]}}"#,
    );
    let out = cho(&["validate", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).count(), 2);
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("v/report.json")).unwrap()).unwrap();
    assert_eq!(report["outcomes"].as_array().unwrap().len(), 2);
}

#[test]
fn paper_figures_materialise_scenarios() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cho(&["trajectory", "--paper-figures", "--out", tmp.path().to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    for (name, x2) in [("beat-0.01-trajectory", -1.0), ("beat-0.005-trajectory", -std::f64::consts::SQRT_2)] {
        let dir = tmp.path().join(name);
        let scenario: Value = serde_json::from_str(&fs::read_to_string(dir.join("scenario.json")).unwrap()).unwrap();
        assert_eq!(scenario["run"]["x0"][1].as_f64().unwrap(), x2);
        let (_, rows) = read_csv(&fs::read(dir.join("trajectory.csv")).unwrap()).unwrap();
        // the field is odd about δωt = π/2, so the path closes at π/δω
        let last = rows.last().unwrap();
        assert!((last[2] - x2).abs() < 1e-3, "{name}: {last:?}");
    }
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_mode = write_config(tmp.path(), "a.json", SMALL_MARGINALS);
    let out = cho(&["trajectory", "--config", &bad_mode], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["kind"], "config");

    let unknown = write_config(
        tmp.path(),
        "b.json",
        r#"{"name": "x", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}}, "run": {"mode": "energies", "sample": 3}}"#,
    );
    assert_eq!(cho(&["energies", "--config", &unknown], tmp.path()).status.code(), Some(2));

    let negative = write_config(
        tmp.path(),
        "c.json",
        r#"{"name": "x", "params": {"direct": {"m": 1, "k": -1, "lambda": 0.1}}, "run": {"mode": "energies"}}"#,
    );
    let out = cho(&["energies", "--config", &negative], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["exit_code"], 2);

    assert_eq!(cho(&["energies"], tmp.path()).status.code(), Some(2));
    assert_eq!(cho(&["energies", "--config", &negative, "--workers", "0"], tmp.path()).status.code(), Some(2));
}

#[test]
fn singular_start_exits_3_with_flagged_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "s.json",
        r#"{"name": "s", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
            "run": {"mode": "trajectory", "x0": [0.0, 0.0]}}"#,
    );
    let out = cho(&["trajectory", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["error"]["kind"], "singularity");
    let m = manifest(&tmp.path().join("s"));
    assert_eq!(m["partial"], true);
    assert_eq!(m["error"]["exit_code"], 3);
}

#[test]
fn unwritable_output_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "m.json", SMALL_MARGINALS);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("sub");
    let out = cho(&["marginals", "--config", &cfg, "--out", target.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_json(&out)["error"]["kind"], "io");
}
