use std::path::Path;
use std::process::{Command, Output};

use qufti_cli::{verify, CliError, VerifyArgs};
use qufti_core::permanent_closed_form;
use tempfile::TempDir;

fn qufti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qufti"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

/// Data rows of a CSV file as parsed floats (`inf` allowed).
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect()
}

#[test]
fn verify_writes_report_and_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let res = qufti(&[
        "verify",
        "--n-max",
        "10",
        "--samples",
        "64",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["n_range"], serde_json::json!([2, 10]));
    assert_eq!(v["samples"], 64);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_rejects_small_range() {
    let res = qufti(&["verify", "--n-max", "1"]);
    assert_eq!(res.status.code(), Some(2));
    let res = qufti(&["verify", "--n-max", "31"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_flags_corrupted_formula() {
    let dir = TempDir::new().unwrap();
    let args = VerifyArgs {
        n_max: 12,
        samples: 64,
        out: Some(dir.path().join("bad.json")),
    };
    // sign flip in the exponent of the product form
    let err = verify(&args, |n, phi| permanent_closed_form(n, -phi)).unwrap_err();
    assert!(matches!(err, CliError::Check(_)));
    assert_eq!(err.exit_code(), 1);
    assert!(args.out.as_ref().unwrap().exists());
}

#[test]
fn phase_scan_shape_and_values() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.csv");
    let res = qufti(&["phase-scan", "--n", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = read(&out);
    assert_eq!(text.lines().next(), Some("phi,P"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 361);
    assert_eq!(rows[0], vec![0.0, 1.0]);

    let res = qufti(&[
        "phase-scan",
        "--n",
        "2",
        "--phi-min",
        "0",
        "--phi-max",
        "3.141592653589793",
        "--steps",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let rows = csv_rows(&read(&out));
    assert!((rows[1][0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!(rows[1][1].abs() < 1e-12);
}

#[test]
fn phase_scan_usage_errors() {
    assert_eq!(
        qufti(&["phase-scan", "--n", "4", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qufti(&[
            "phase-scan",
            "--n",
            "4",
            "--phi-min",
            "1",
            "--phi-max",
            "0.5"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sensitivity_scan_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.csv");
    let res = qufti(&[
        "sensitivity-scan",
        "--n-min",
        "2",
        "--n-max",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = read(&out);
    assert_eq!(text.lines().next(), Some("n,phi,P,dP,delta_phi,snl,hl"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 19);
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() < tol;
    let n2 = &rows[0];
    assert!(
        close(n2[4], 0.5, 1e-12)
            && close(n2[5], std::f64::consts::FRAC_1_SQRT_2, 1e-12)
            && close(n2[6], 0.5, 1e-12)
    );
    let n10 = &rows[8];
    assert_eq!(n10[0], 10.0);
    assert!(
        close(n10[4], 0.03893, 1e-5) && close(n10[5], 0.1474, 1e-4) && close(n10[6], 0.02174, 1e-5)
    );
    for r in &rows {
        assert!(r[6] <= r[4] && r[4] <= r[5], "{r:?}");
    }
    assert_eq!(
        qufti(&["sensitivity-scan", "--n-min", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qufti(&["sensitivity-scan", "--n-max", "26"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qufti(&["sensitivity-scan", "--n-min", "8", "--n-max", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dephasing_defaults() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d.csv");
    let res = qufti(&["dephasing", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = read(&out);
    assert_eq!(
        text.lines().next(),
        Some("n,chi,delta_phi_qufti,delta_phi_noon")
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 21 * 5);
    for chunk in rows.chunks(21) {
        let n = chunk[0][0] as usize;
        assert_eq!(chunk[0][1], 0.0);
        let undephased = qufti_core::phase_sensitivity_numeric(n, 0.01)
            .unwrap()
            .value();
        assert!((chunk[0][2] - undephased).abs() < 1e-9);
        assert!(chunk.windows(2).all(|w| w[1][2] >= w[0][2]), "n = {n}");
        assert!((chunk[20][1] - 0.01).abs() < 1e-15);
    }
    assert_eq!(qufti(&["dephasing", "--phi", "0"]).status.code(), Some(2));
    assert_eq!(qufti(&["dephasing", "--n", "1,4"]).status.code(), Some(2));
}

#[test]
fn distribution_command() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("dist.json");
    let res = qufti(&[
        "distribution",
        "--n",
        "3",
        "--phi",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stderr).contains("normalization residual"));
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let ones = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["occupation"] == serde_json::json!([1, 1, 1]))
        .unwrap();
    assert!((ones["probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let res = qufti(&[
        "distribution",
        "--n",
        "3",
        "--phi",
        "0.7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 10);
    let total: f64 = entries
        .iter()
        .map(|e| e["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);

    assert_eq!(qufti(&["distribution", "--n", "8"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 4] = [
        &["phase-scan", "--n", "5", "--steps", "50"],
        &["sensitivity-scan", "--n-max", "12", "--phi", "0.02"],
        &["dephasing", "--n", "3,6", "--steps", "7"],
        &["verify", "--n-max", "8", "--samples", "16"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        let mut first = args.to_vec();
        first.extend(["--out", a.to_str().unwrap()]);
        let mut second = args.to_vec();
        second.extend(["--threads", "1", "--out", b.to_str().unwrap()]);
        assert_eq!(qufti(&first).status.code(), Some(0));
        assert_eq!(qufti(&second).status.code(), Some(0));
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn stdout_when_no_out_path() {
    let res = qufti(&["phase-scan", "--n", "2", "--steps", "2"]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&res.stdout).lines().count(), 3);
}
