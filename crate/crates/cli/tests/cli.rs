// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn cqubits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqubits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows as numbers, comments and the header skipped.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn column_header(text: &str) -> &str {
    text.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn every_subcommand_exists() {
    for sub in [
        "teleport-sweep",
        "hadamard-sweep",
        "loss-sweep",
        "ecc",
        "validate",
    ] {
        let o = cqubits(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
    }
}

#[test]
fn teleport_sweep_csv() {
    let o = cqubits(&["teleport-sweep", "--alpha", "0.5:3:0.5", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut comments = text.lines().take_while(|l| l.starts_with('#'));
    assert!(comments.next().unwrap().starts_with("# coherent-qubits "));
    assert!(text.contains("# config-sha256: "));
    assert!(text.contains("# seed: 9\n"));
    assert_eq!(
        column_header(&text),
        "alpha,p_success_pm,p_success_zeroalpha,p_fail"
    );
    let r = rows(&text);
    assert_eq!(r.len(), 6);
    for w in r.windows(2) {
        assert!(w[1][1] > w[0][1]);
    }
    for row in &r {
        assert!((row[1] - row[2]).abs() < 1e-10);
        assert!((row[1] + row[3] - 1.0).abs() < 1e-15);
    }
    assert!(r[5][1] > 0.999);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["ecc", "--seed", "11", "--trials", "40", "--pe", "0:0.3:0.1"];
    let (a, b) = (cqubits(&args), cqubits(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = cqubits(&["ecc", "--seed", "12", "--trials", "40", "--pe", "0:0.3:0.1"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn ecc_columns_and_limits() {
    let o = cqubits(&["ecc", "--seed", "3", "--trials", "50", "--pe", "0:0.5:0.25"]);
    let text = stdout(&o);
    assert_eq!(
        column_header(&text),
        "pe,n,ps_analytic,ps_montecarlo,stderr,undetected_rate"
    );
    let r = rows(&text);
    assert_eq!(r[0][2], 1.0);
    assert!((r[0][3] - 1.0).abs() < 1e-10);
    assert!((r[2][2] - 0.5).abs() < 1e-15);
    assert!(r[2][3].is_nan());
}

#[test]
fn ecc_without_seed_is_a_config_error() {
    let o = cqubits(&["ecc"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
}

#[test]
fn bad_configs_exit_2() {
    assert_eq!(
        cqubits(&["teleport-sweep", "--alpha", "3:1:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cqubits(&["teleport-sweep", "--encoding", "qutrit"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cqubits(&["loss-sweep", "--eta", "0.5", "--length", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cqubits(&["hadamard-sweep", "--fidelity-target", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cqubits(&["teleport-sweep", "--config", "/nonexistent/cfg"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        "# two points\nexperiment = teleport-sweep\nalpha = 1:2:1\nmu = 1,0\nnu = 0,1\n",
    )
    .unwrap();
    let o = cqubits(&[
        "teleport-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "1:3:1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(rows(&text).len(), 3);

    std::fs::write(&cfg, "alpha 1\n").unwrap();
    let o = cqubits(&["teleport-sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn loss_sweep_starts_at_the_teleport_value() {
    let loss = rows(&stdout(&cqubits(&["loss-sweep"])));
    let tele = rows(&stdout(&cqubits(&["teleport-sweep", "--alpha", "2"])));
    assert_eq!(loss[0][0], 0.0);
    assert_eq!(loss[0][1], 1.0);
    assert!((loss[0][3] - tele[0][1]).abs() < 1e-12);
    for w in loss.windows(2) {
        assert!(w[1][3] < w[0][3]);
    }
    let point = rows(&stdout(&cqubits(&["loss-sweep", "--length", "10"])));
    assert!((point[0][0] - 0.6).abs() < 1e-12);
    assert!((point[0][1] - (-0.6f64).exp()).abs() < 1e-15);
}

#[test]
fn hadamard_sweep_anchors() {
    let r = rows(&stdout(&cqubits(&["hadamard-sweep", "--alpha", "2:4:2"])));
    assert!((r[0][2] - 0.29).abs() < 0.02);
    assert!((r[1][2] - 0.59).abs() < 0.02);
}

#[test]
fn validate_passes() {
    let o = cqubits(&["validate"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() > 40);
    assert!(!text.contains("FAIL "));
}
