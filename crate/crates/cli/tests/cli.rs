use std::path::PathBuf;
use std::process::{Command, Output};

fn ulamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulamlab")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ulamlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn help_lists_every_subcommand() {
    let help = stdout(&["--help"]);
    for cmd in ["moments", "oracle", "rate", "series", "elliptic", "solvable", "mc", "verify"] {
        assert!(help.lines().any(|l| l.trim_start().starts_with(cmd)), "{cmd} missing from help");
    }
}

#[test]
fn moments_and_oracle_agree_on_nineteen_sixths() {
    assert_eq!(stdout(&["moments", "--n", "3", "--k", "2", "--order", "2"]), "19/6\n");
    assert_eq!(stdout(&["oracle", "--n", "3", "--k", "2", "--order", "2"]), "19/6\n");
    assert_eq!(stdout(&["oracle", "--n", "5", "--k", "2", "--l", "3"]), stdout(&["moments", "--n", "5", "--k", "2", "--l", "3"]));
}

#[test]
fn rate_at_unit_point() {
    let v: f64 = stdout(&["rate", "--kappa", "1", "--lambda", "1", "--gamma", "1", "--form", "xyz"]).trim().parse().unwrap();
    assert!((v - 2.5 * 5f64.ln()).abs() < 1e-13);
    assert!(!ulamlab(&["rate", "--kappa", "1", "--lambda", "1", "--gamma", "1", "--form", "bogus"]).status.success());
}

#[test]
fn series_row_for_unit_exponents() {
    let csv = stdout(&["series", "--max-degree", "4"]);
    assert!(csv.starts_with("k,l,j,numerator,denominator\n"));
    assert!(csv.lines().any(|l| l == "1,1,1,10,1"));
}

#[test]
fn elliptic_reports_omega_roots() {
    let out = stdout(&["elliptic", "--x", "0.1", "0.1", "0.1"]);
    assert!(out.lines().any(|l| l == "omega_plus_plus,10.0000000000000"), "{out}");
}

#[test]
fn solvable_boundary_is_an_error() {
    let out = ulamlab(&["solvable", "--m", "0", "--kappa", "1.5", "--t", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sqrt(2)"));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["mc", "--n", "10", "--k", "3", "--t", "2", "--samples", "5000", "--seed", "7"][..],
        &["solvable", "--m", "3", "--kappa", "1", "--t", "2", "--csv"][..],
        &["moments", "--n", "200", "--k", "14", "--log", "--terms"][..],
    ] {
        assert_eq!(ulamlab(args).stdout, ulamlab(args).stdout, "{args:?}");
    }
}

#[test]
fn verify_writes_versioned_report() {
    let path = scratch("exact.json");
    let out = ulamlab(&["verify", "--suite", "exact", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], "ulamlab-report-v1");
    let records = report["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn verify_rates_reports_discrepancies_without_failing() {
    let path = scratch("rates.json");
    assert!(ulamlab(&["verify", "--suite", "rates", "--json", path.to_str().unwrap()]).status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mixed = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check_id"] == "mixed_value_vs_optimization_1_1")
        .expect("mixed audit record");
    assert_eq!(mixed["status"], "discrepancy");
}

#[test]
fn verify_with_empty_path_fails() {
    let out = ulamlab(&["verify", "--suite", "gf", "--json", ""]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("I/O"));
}

#[test]
fn unknown_suite_and_bad_config_are_rejected() {
    let path = scratch("unused.json");
    assert!(!ulamlab(&["verify", "--suite", "nope", "--json", path.to_str().unwrap()]).status.success());
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "exact_cap = lots\n").unwrap();
    let out = ulamlab(&["--config", cfg.to_str().unwrap(), "moments", "--n", "3", "--k", "2"]);
    assert!(!out.status.success());
}

#[test]
fn config_caps_are_enforced() {
    let cfg = scratch("small.cfg");
    std::fs::write(&cfg, "perm_cap = 4\n").unwrap();
    let out = ulamlab(&["--config", cfg.to_str().unwrap(), "oracle", "--n", "5", "--k", "2"]);
    assert!(!out.status.success());
    assert!(stdout(&["--config", cfg.to_str().unwrap(), "oracle", "--n", "4", "--k", "2"]).ends_with('\n'));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["mc", "--n", "12", "--k", "3", "--t", "1.5", "--samples", "4000", "--seed", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_ulamlab")).args(args).env("ULAMLAB_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_ulamlab")).args(args).env("ULAMLAB_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_ulamlab")).args(args).env("ULAMLAB_THREADS", "0").output().unwrap();
    assert!(!bad.status.success());
}
