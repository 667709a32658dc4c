use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rqm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rqm"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

const ROTATION_2D: &str = r#"{"rows": 2, "cols": 2, "data": [0, 1, -1, 0]}"#;
const I_SIGMA_3: &str = r#"{"rows": 3, "cols": 3, "data": [0, 1, 0, -1, 0, 0, 0, 0, 0]}"#;

#[test]
fn gen_one_by_one_is_zero() {
    let dir = TempDir::new().unwrap();
    assert!(rqm(
        dir.path(),
        &["gen", "--n", "1", "--seed", "9", "--out", "a.json"]
    )
    .status
    .success());
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(v["rows"], 1);
    assert_eq!(v["data"][0].as_f64(), Some(0.0));
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    for out in ["x.json", "y.json"] {
        assert!(rqm(
            dir.path(),
            &["gen", "--n", "4", "--seed", "42", "--out", out]
        )
        .status
        .success());
    }
    let x = std::fs::read(dir.path().join("x.json")).unwrap();
    assert_eq!(x, std::fs::read(dir.path().join("y.json")).unwrap());
}

#[test]
fn gen_rejects_zero_dimension() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        rqm(dir.path(), &["gen", "--n", "0", "--out", "a.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_reports_io_failure() {
    let dir = TempDir::new().unwrap();
    let out = rqm(
        dir.path(),
        &["gen", "--n", "2", "--out", "missing/dir/a.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn decompose_plain_rotation() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "a.json",
        r#"{"rows": 2, "cols": 2, "data": [0, 2, -2, 0]}"#,
    );
    let out = rqm(
        dir.path(),
        &["decompose", "--in", "a.json", "--out", "cf.json"],
    );
    assert!(out.status.success());
    let cf: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cf.json")).unwrap())
            .unwrap();
    assert_eq!(cf["frequencies"], serde_json::json!([2.0]));
    assert_eq!(cf["zero_modes"], 0);
}

#[test]
fn decompose_spin_generator_reports_vacuum_state() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", I_SIGMA_3);
    let out = rqm(
        dir.path(),
        &["decompose", "--in", "a.json", "--out", "cf.json"],
    );
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "1 oscillator pair (ω=1), 1 static state"
    );
}

#[test]
fn decompose_rejects_non_skew_and_bad_json() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "m.json",
        r#"{"rows": 2, "cols": 2, "data": [0, 2, 0.5, 0]}"#,
    );
    let out = rqm(
        dir.path(),
        &["decompose", "--in", "m.json", "--out", "cf.json"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max|A + A^T|"));

    write(dir.path(), "bad.json", r#"{"rows": 2, "cols": "#);
    assert_eq!(
        rqm(
            dir.path(),
            &["decompose", "--in", "bad.json", "--out", "cf.json"]
        )
        .status
        .code(),
        Some(4)
    );
}

#[test]
fn evolve_quarter_period() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", ROTATION_2D);
    write(dir.path(), "psi.json", "[1, 0]");
    let t1 = format!("{}", 4.0 * FRAC_PI_2);
    let out = rqm(
        dir.path(),
        &[
            "evolve", "--in", "a.json", "--psi", "psi.json", "--t1", &t1, "--steps", "9", "--out",
            "t.csv",
        ],
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("final norm"));
    let rows = csv_rows(&dir.path().join("t.csv"));
    assert_eq!(rows.len(), 9);
    let quarter = &rows[2];
    assert!((quarter[0] - FRAC_PI_2).abs() < 1e-15);
    assert!(quarter[1].abs() < 1e-12 && (quarter[2] + 1.0).abs() < 1e-12);
    let last = &rows[8];
    assert!((last[1] - 1.0).abs() < 1e-12 && last[2].abs() < 1e-12);
}

#[test]
fn evolve_zero_generator_is_constant() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "a.json",
        r#"{"rows": 3, "cols": 3, "data": [0,0,0,0,0,0,0,0,0]}"#,
    );
    write(dir.path(), "psi.json", "[0.6, 0, 0.8]");
    assert!(rqm(
        dir.path(),
        &[
            "evolve", "--in", "a.json", "--psi", "psi.json", "--t1", "5", "--steps", "4", "--out",
            "t.csv"
        ]
    )
    .status
    .success());
    for row in csv_rows(&dir.path().join("t.csv")) {
        assert_eq!(&row[1..], &[0.6, 0.0, 0.8]);
    }
}

#[test]
fn evolve_random_system_keeps_unit_norm() {
    let dir = TempDir::new().unwrap();
    assert!(rqm(
        dir.path(),
        &["gen", "--n", "10", "--seed", "5", "--out", "a.json"]
    )
    .status
    .success());
    let psi = format!("[{}]", ["0.31622776601683794"; 10].join(", "));
    write(dir.path(), "psi.json", &psi);
    assert!(rqm(
        dir.path(),
        &[
            "evolve", "--in", "a.json", "--psi", "psi.json", "--t1", "20", "--steps", "50",
            "--out", "t.csv"
        ]
    )
    .status
    .success());
    for row in csv_rows(&dir.path().join("t.csv")) {
        let norm = row[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn evolve_rejects_dimension_mismatch() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", ROTATION_2D);
    write(dir.path(), "psi.json", "[1, 0, 0]");
    let out = rqm(
        dir.path(),
        &[
            "evolve", "--in", "a.json", "--psi", "psi.json", "--t1", "1", "--steps", "3", "--out",
            "t.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn equiv_passes_and_detects_corruption() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "zero.json",
        r#"{"rows": 2, "cols": 2, "data": [0, 0, 0, 0]}"#,
    );
    write(
        dir.path(),
        "blocks.json",
        r#"{"rows": 4, "cols": 4, "data": [0,2,0,0, -2,0,0,0, 0,0,0,1, 0,0,-1,0]}"#,
    );
    write(dir.path(), "psi2.json", "[1, 0]");
    write(dir.path(), "psi4.json", "[0.5, 0.5, 0.5, 0.5]");

    let zero = rqm(
        dir.path(),
        &["equiv", "--in", "zero.json", "--psi", "psi2.json"],
    );
    assert!(zero.status.success());
    assert!(stdout(&zero).contains("max deviation: 0"));

    let blocks = rqm(
        dir.path(),
        &[
            "equiv",
            "--in",
            "blocks.json",
            "--psi",
            "psi4.json",
            "--seed",
            "3",
        ],
    );
    assert!(blocks.status.success());
    let dev: f64 = stdout(&blocks)
        .trim()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev <= 1e-12);

    let corrupt = rqm(
        dir.path(),
        &[
            "equiv",
            "--in",
            "blocks.json",
            "--psi",
            "psi4.json",
            "--corrupt",
            "1e-6",
        ],
    );
    assert_eq!(corrupt.status.code(), Some(5));
}

#[test]
fn demos_report_json() {
    let dir = TempDir::new().unwrap();
    let spin = rqm(dir.path(), &["demo", "spin1"]);
    assert!(spin.status.success());
    let report: Value = serde_json::from_str(&stdout(&spin)).unwrap();
    assert_eq!(report["passed"], true);

    let nh = rqm(dir.path(), &["demo", "nonhermitian"]);
    assert!(nh.status.success());
    let report: Value = serde_json::from_str(&stdout(&nh)).unwrap();
    assert_eq!(report["hermitian"], false);
    assert_eq!(report["eigenvalues"], serde_json::json!([1.0, -1.0]));

    let measure = rqm(
        dir.path(),
        &[
            "demo",
            "measure",
            "--s-overlap",
            "0.5",
            "--a-overlap",
            "0.2",
        ],
    );
    assert!(measure.status.success());
    assert!(stdout(&measure).contains("INFEASIBLE"));

    assert!(
        rqm(dir.path(), &["demo", "n3", "--omega", "2", "--tau", "0.7"])
            .status
            .success()
    );
    assert_eq!(
        rqm(dir.path(), &["demo", "quaternion"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_reports_rows_and_rejects_bad_arguments() {
    let dir = TempDir::new().unwrap();
    let out = rqm(
        dir.path(),
        &["bench", "--n", "2,64", "--repeats", "1", "--out", "b.csv"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(cols[3] <= 1e-12);
        assert!(cols[4] > 0.0 && cols[5] > 0.0);
    }
    assert_eq!(
        rqm(dir.path(), &["bench", "--repeats", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rqm(dir.path(), &["bench", "--n", "3"]).status.code(),
        Some(2)
    );
}
