//! End to end runs of the compiled binary over a temp directory.

use std::path::Path;
use std::process::{Command, Output};

fn distmatch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distmatch"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn generate_run_check_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = distmatch(
        &["generate", "--kind", "example1", "--n", "3", "--out", "inst.json"],
        dir.path(),
    );
    assert!(out.status.success());

    let out = distmatch(
        &[
            "run",
            "--mechanism",
            "sd",
            "--instance",
            "inst.json",
            "--out",
            "y.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("y.json")).unwrap())
            .unwrap();
    assert_eq!(doc["assignment"]["s1"], "c2");
    assert_eq!(doc["assignment"]["s2"], "c3");
    assert_eq!(doc["assignment"]["s3"], serde_json::Value::Null);

    let out = distmatch(
        &["check", "--instance", "inst.json", "--matching", "y.json", "--pareto"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["feasible"], true);
    assert_eq!(report["pareto_efficient"]["holds"], true);

    let out = distmatch(
        &[
            "oracle",
            "exists",
            "--instance",
            "inst.json",
            "--require",
            "nonwasteful",
            "--ef-k",
            "1",
        ],
        dir.path(),
    );
    let answer: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(answer["exists"], false);
}

#[test]
fn verify_tables_reports_the_impossibility() {
    let dir = tempfile::tempdir().unwrap();
    let out = distmatch(&["oracle", "verify-tables"], dir.path());
    let text = stdout(&out);
    assert_eq!(text.matches("no strategyproof selection exists").count(), 2);
    assert!(text.contains("table thm4.1"));
    assert!(text.contains("table thm4.2"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn sp_check_flags_a_manipulable_mechanism() {
    let dir = tempfile::tempdir().unwrap();
    let out = distmatch(
        &["generate", "--kind", "example1", "--n", "3", "--out", "inst.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = distmatch(
        &[
            "oracle",
            "sp-check",
            "--mechanism",
            "sd",
            "--instance",
            "inst.json",
        ],
        dir.path(),
    );
    let answer: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(answer["strategyproof"], true);
}

#[test]
fn experiment_writes_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = distmatch(
        &[
            "experiment",
            "fig1",
            "--preset",
            "desk",
            "--seed",
            "7",
            "--out",
            "fig1.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    assert!(csv.starts_with("phi_c,rho,method,mean_k,stderr\n"));
    assert_eq!(csv.lines().count(), 31);
    assert!(!csv.contains('\r'));
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = distmatch(&["generate", "--kind", "nonsense"], dir.path());
    assert!(!out.status.success());
    let out = distmatch(&["oracle", "verify-tables", "thm9.9"], dir.path());
    assert!(!out.status.success());
}
