//! End-to-end tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn zaremba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zaremba"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("zaremba-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn expand_real() {
    let out = zaremba(&["expand", "3/7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[2, 3] verified\n");

    let out = zaremba(&["expand", "1/2"]);
    assert_eq!(stdout(&out), "[2] verified\n");

    let out = zaremba(&["expand", "0/5"]);
    assert_eq!(stdout(&out), "[] verified\n");
}

#[test]
fn expand_complex() {
    let out = zaremba(&["expand", "--d", "1", "(3-1w)/(7)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[2+1w, 1+3w] verified\n");

    let out = zaremba(&["expand", "--d", "1", "(2-1w)/(5)"]);
    assert_eq!(stdout(&out), "[2+1w] verified\n");

    // Bare integer terms parse too.
    let out = zaremba(&["expand", "--d", "3", "1/3"]);
    assert!(out.status.success());
}

#[test]
fn expand_errors_exit_1() {
    // Parse failure.
    let out = zaremba(&["expand", "three-sevenths"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error"));

    // Out of domain.
    let out = zaremba(&["expand", "5/3"]);
    assert_eq!(out.status.code(), Some(1));

    // z outside the fundamental domain.
    let out = zaremba(&["expand", "--d", "1", "(3+0w)/(1)"]);
    assert_eq!(out.status.code(), Some(1));

    // Bad field.
    let out = zaremba(&["expand", "--d", "5", "1/3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_summaries() {
    let out = zaremba(&["count", "--a", "2", "--n", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Omega=4 Sigma_N=2\n");

    let out = zaremba(&["count", "--a", "2", "--n", "2"]);
    assert_eq!(stdout(&out), "Omega=1 Sigma_N=1\n");

    let out = zaremba(&["count", "--a", "2", "--n", "5", "--gamma", "0.5"]);
    assert_eq!(stdout(&out), "Omega=4 Sigma_N=2 Thickened=4\n");

    // Dyadic syntax for N.
    let out = zaremba(&["count", "--a", "2", "--n", "2^6"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("Omega="));
}

#[test]
fn count_validation_errors() {
    let out = zaremba(&["count", "--a", "1", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = zaremba(&["count", "--a", "2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));

    let out = zaremba(&["count", "--a", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_csv_reproducible_and_parseable() {
    let f1 = tmpfile("t1.csv");
    let f2 = tmpfile("t2.csv");
    let base = ["count", "--a", "3", "--n", "400", "--gamma", "0.5"];
    let out = zaremba(&[&base[..], &["--output", f1.to_str().unwrap()]].concat());
    assert!(out.status.success());
    // Same config again, different thread count: byte-identical output.
    let out = zaremba(
        &[&base[..], &["--output", f2.to_str().unwrap(), "--threads", "1"]].concat(),
    );
    assert!(out.status.success());
    let t1 = std::fs::read(&f1).unwrap();
    let t2 = std::fs::read(&f2).unwrap();
    assert_eq!(t1, t2);

    // Round trip through the documented CSV schema.
    let text = String::from_utf8(t1).unwrap();
    assert!(text.starts_with("n,count,w_-0.2,w_-0.1,w_0,w_0.1,w_0.2\n"));
    let parsed = zaremba_core::counting::CountCsv::parse(&text).unwrap();
    assert_eq!(parsed.to_string(), text);
    let _ = std::fs::remove_file(f1);
    let _ = std::fs::remove_file(f2);
}

#[test]
fn count_json_output_parses() {
    let f = tmpfile("t.json");
    let out = zaremba(&[
        "count", "--a", "2", "--n", "100", "--format", "json", "--output",
        f.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&f).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["ws"].is_array());
    assert!(v["rows"].is_array());
    // Counts survive the round trip.
    let total: u64 = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[1].as_u64().unwrap())
        .sum();
    let table = zaremba_core::counting::enumerate_real(2, 100);
    assert_eq!(total, table.total());
    let _ = std::fs::remove_file(f);
}

#[test]
fn complex_count_summary() {
    let out = zaremba(&["complex-count", "--d", "1", "--max-norm", "8", "--n", "100"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.starts_with("Omega=834 "), "got: {s}");
}

#[test]
fn dimension_json_record() {
    let out = zaremba(&["dimension", "--a", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["A"], 2);
    let delta = v["delta"].as_f64().unwrap();
    assert!(delta > 0.531 && delta < 0.532);
    assert!(v["lo"].as_f64().unwrap() <= delta && delta <= v["hi"].as_f64().unwrap());
    assert_eq!(v["m"], 64);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);

    // Dimensions are ordered in A.
    let out3 = zaremba(&["dimension", "--a", "3"]);
    let v3: serde_json::Value = serde_json::from_str(stdout(&out3).trim()).unwrap();
    assert!(v3["delta"].as_f64().unwrap() > delta);
}

#[test]
fn dimension_degenerate_alphabet() {
    let out = zaremba(&["dimension", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dimension is 0 (degenerate alphabet)"));
}

#[test]
fn pole_moves_right_of_delta() {
    let out = zaremba(&["pole", "--a", "2", "--w", "0.1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let s0 = v["s0"].as_f64().unwrap();
    assert!(s0 > 0.5312805 && s0 < 1.0);
}

#[test]
fn verify_identity_only_passes() {
    let out = zaremba(&["verify", "--a", "2", "--identity-only"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("PASS identity"), "got: {s}");
}

#[test]
fn verify_full_passes_and_negative_control_fails() {
    let out = zaremba(&["verify", "--a", "2", "--n-max", "2^16", "--gamma", "0.5"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "stdout: {s}");
    for check in ["PASS identity", "PASS exponent", "PASS smoothing", "PASS window-law", "PASS inclusion"] {
        assert!(s.contains(check), "missing {check} in: {s}");
    }

    // Deliberately wrong delta must fail the exponent check with exit 2.
    let out = zaremba(&[
        "verify", "--a", "2", "--n-max", "2^16", "--gamma", "0.5", "--inject-delta", "0.6",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL exponent"));
}

#[test]
fn config_file_with_flag_precedence() {
    let cfg = tmpfile("cfg");
    std::fs::write(&cfg, "a=2\nn=5\n# comment line\ngamma=0.5\n").unwrap();
    let out = zaremba(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Omega=4 Sigma_N=2 Thickened=4\n");

    // Flags override the file.
    let out = zaremba(&["count", "--config", cfg.to_str().unwrap(), "--n", "2"]);
    assert_eq!(stdout(&out), "Omega=1 Sigma_N=1 Thickened=1\n");
    let _ = std::fs::remove_file(cfg);
}

#[test]
fn help_exits_zero() {
    let out = zaremba(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = zaremba(&["nonsense-subcommand"]);
    assert_eq!(out.status.code(), Some(1));
}
