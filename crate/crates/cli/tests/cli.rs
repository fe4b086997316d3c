use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const RESONANCE: &str = r#"{"kind": "torus", "weights": [[1, -1]], "mode": "affine"}"#;
const CUBICS: &str = r#"{"kind": "su2", "spins": [3], "mode": "projective"}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symquot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_and_config_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "r.json", RESONANCE);
    let bad = config(&dir, "bad.json", r#"{"kind": "torus"}"#);
    let extra = config(
        &dir,
        "extra.json",
        r#"{"kind": "torus", "weights": [[1]], "mode": "affine", "colour": 1}"#,
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["nope"]).status.code(), Some(1));
    assert_eq!(
        run(&["--rep", path_str(&missing), "classify", "--point", "1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&bad), "classify", "--point", "1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&extra), "classify", "--point", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&good), "classify"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&good), "classify", "--point", "1,1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&good), "classify", "--point", "1,zz"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "--rep",
            path_str(&good),
            "--tol-phi",
            "-1",
            "classify",
            "--point",
            "1,1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&["--rep", path_str(&good), "flow", "--point", "1,0", "--csv"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn classify_resonance_points() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let report = json(&run(&[
        "--rep",
        path_str(&rep),
        "classify",
        "--point",
        "1,1",
    ]));
    assert_eq!(report["command"], "classify");
    assert_eq!(report["rows"][0]["tag"], "stable");
    assert_eq!(report["rows"][0]["closed_orbit"], true);
    let report = json(&run(&[
        "--rep",
        path_str(&rep),
        "classify",
        "--point",
        "1,0",
    ]));
    assert_eq!(report["rows"][0]["tag"], "semistable");
    assert_eq!(report["rows"][0]["closed_orbit"], false);
}

#[test]
fn classify_binary_cubics() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "c.json", CUBICS);
    let report = json(&run(&[
        "--rep",
        path_str(&rep),
        "classify",
        "--point",
        "1,0,0,1",
    ]));
    assert_eq!(report["rows"][0]["tag"], "stable");
    // x^2 y in the normalized basis
    let report = json(&run(&[
        "--rep",
        path_str(&rep),
        "classify",
        "--point",
        "0,1,0,0",
    ]));
    assert_eq!(report["rows"][0]["tag"], "unstable");
}

#[test]
fn reports_are_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let rep = config(
        &dir,
        "r.json",
        r#"{"kind": "torus", "weights": [[1, -2, 1], [0, 1, -1]], "mode": "projective"}"#,
    );
    let batch = |seed| {
        run(&[
            "--rep",
            path_str(&rep),
            "--seed",
            seed,
            "classify",
            "--batch",
            "6",
        ])
    };
    let (a, b, c) = (batch("9"), batch("9"), batch("10"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_qr_batch_passes() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let report = json(&run(&[
        "--rep",
        path_str(&rep),
        "--seed",
        "3",
        "verify-qr",
        "--batch",
        "8",
        "--degree",
        "0..5",
    ]));
    assert_eq!(report["all_equal"], true);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    let rows = report["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["source"] == "rep"));
    assert!(rows
        .iter()
        .all(|r| r["equal"] == true && r["upstairs"] == r["downstairs"]));
}

#[test]
fn invariants_of_the_resonance() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let report = json(&run(&["--rep", path_str(&rep), "invariants"]));
    let basis = &report["hilbert_basis"];
    assert_eq!(basis["certified"], true);
    let gens = basis["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0]["exponents"], serde_json::json!([1, 1]));
    let dims: Vec<u64> = report["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [0, 2]);
}

#[test]
fn multiplicity_csv_table() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let out = run(&[
        "--rep",
        path_str(&rep),
        "multiplicity",
        "--degree",
        "0..5",
        "--csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# symquot"));
    assert_eq!(lines.next(), Some("lambda,degree,count"));
    let counts: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(counts, ["1", "0", "1", "0", "1", "0"]);
}

#[test]
fn flow_trajectory_format() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let out = run(&[
        "--rep",
        path_str(&rep),
        "flow",
        "--point",
        "1,0",
        "--every",
        "10",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# symquot trajectory");
    assert!(lines[1].starts_with("# version "));
    assert!(lines[2].starts_with("# config "));
    assert_eq!(lines[3], "# columns t mu re1 im1 re2 im2");
    assert!(lines.last().unwrap().starts_with("# end converged=true"));
    let rows: Vec<Vec<f64>> = lines[4..lines.len() - 1]
        .iter()
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() >= 2);
    assert!(rows.iter().all(|r| r.len() == 6));
    assert_eq!(rows[0][0], 0.0);
    assert!(rows
        .windows(2)
        .all(|w| w[1][0] > w[0][0] && w[1][1] <= w[0][1]));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = TempDir::new().unwrap();
    let rep = config(&dir, "r.json", RESONANCE);
    let target = dir.path().join("report.json");
    let out = run(&[
        "--rep",
        path_str(&rep),
        "--out",
        path_str(&target),
        "classify",
        "--point",
        "1,1",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let direct = run(&["--rep", path_str(&rep), "classify", "--point", "1,1"]);
    assert_eq!(std::fs::read(&target).unwrap(), direct.stdout);
}

#[test]
fn identities_batch_passes() {
    let dir = TempDir::new().unwrap();
    let rep = config(
        &dir,
        "r.json",
        r#"{"kind": "torus", "weights": [[1, -2, 3], [2, 0, -1]], "mode": "affine"}"#,
    );
    let out = run(&[
        "--rep",
        path_str(&rep),
        "--seed",
        "4",
        "identities",
        "--batch",
        "10",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}
