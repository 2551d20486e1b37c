//! Golden-file tests for every subcommand, plus exit-status and determinism checks.

use std::path::PathBuf;
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grassmirror"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn golden(file: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let want = std::fs::read_to_string(golden_dir().join(file)).expect("golden file");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "golden mismatch for {file}");
}

#[test]
fn connection_q() {
    golden("connection_2_4_q.json", &["connection", "--k", "2", "--n", "4", "--dir", "q"]);
}

#[test]
fn connection_z() {
    golden("connection_1_2_z.json", &["connection", "--k", "1", "--n", "2", "--dir", "z"]);
}

#[test]
fn superpotential() {
    golden(
        "superpotential_2_4.txt",
        &["superpotential", "--k", "2", "--n", "4", "--point", "tests/golden/point_2_4.json", "--q", "3/2"],
    );
}

#[test]
fn ehx_text_and_json() {
    golden("ehx_3_5.txt", &["ehx", "--k", "3", "--n", "5"]);
    golden("ehx_2_4.json", &["ehx", "--k", "2", "--n", "4", "--format", "json"]);
}

#[test]
fn aseries_formats() {
    golden("aseries_1_3.csv", &["aseries", "--k", "1", "--n", "3", "--order", "3", "--format", "csv"]);
    golden("aseries_2_4.json", &["aseries", "--k", "2", "--n", "4", "--order", "2", "--format", "json"]);
    golden("aseries_2_5.txt", &["aseries", "--k", "2", "--n", "5", "--order", "2"]);
}

#[test]
fn verify_main_includes_displays() {
    golden("verify_main_3_5.txt", &["verify", "--theorem", "main", "--k", "3", "--n", "5", "--format", "text"]);
    let text = std::fs::read_to_string(golden_dir().join("verify_main_3_5.txt")).unwrap();
    for line in [
        "nabla_q([p_(2,1)w]) = (z^-1)*[p_(2,2)w] + (z^-1)*[p_(3,1)w]",
        "nabla_q([p_(3,2)w]) = (q*z^-1)*[p_(1)w] + (z^-1)*[p_(3,3)w]",
        "nabla_q([p_(3,3)w]) = (q*z^-1)*[p_(2)w]",
        "nabla_z([p_(3,3)w]) = (-5*q*z^-1)*[p_(2)w] + (6)*[p_(3,3)w]",
    ] {
        assert!(text.contains(line), "missing {line}");
    }
}

#[test]
fn verify_vector_field_suites() {
    golden("verify_action_2_4.json", &["verify", "--theorem", "action", "--k", "2", "--n", "4", "--mode", "symbolic"]);
    golden("verify_sum_2_5.json", &["verify", "--theorem", "sum", "--k", "2", "--n", "5", "--points", "5", "--seed", "7"]);
    golden("verify_boundary_3_7.json", &["verify", "--theorem", "boundary-sum", "--k", "3", "--n", "7"]);
    golden("verify_additivity_2_5.json", &["verify", "--theorem", "additivity", "--k", "2", "--n", "5", "--seed", "4"]);
}

#[test]
fn verify_richardson_suites() {
    golden("verify_fw_2_4.json", &["verify", "--theorem", "fw", "--k", "2", "--n", "4", "--samples", "10", "--seed", "3"]);
    golden(
        "verify_eistar_1_3.txt",
        &["verify", "--theorem", "eistar", "--k", "1", "--n", "3", "--mode", "symbolic", "--format", "text"],
    );
}

#[test]
fn verify_symbolic_identities() {
    golden("verify_pullback_2_5.txt", &["verify", "--theorem", "pullback", "--k", "2", "--n", "5", "--format", "text"]);
    golden("verify_flatness_2_6.txt", &["verify", "--theorem", "flatness", "--k", "2", "--n", "6", "--format", "text"]);
}

#[test]
fn cluster_walks() {
    let base = ["cluster", "walk", "--k", "2", "--n", "5", "--steps", "6", "--seed", "1", "--check"];
    golden("walk_ws_2_5.json", &[&base[..], &["ws"]].concat());
    golden("walk_exchange_2_5.json", &[&base[..], &["exchange"]].concat());
    golden(
        "walk_additivity_2_4.json",
        &["cluster", "walk", "--k", "2", "--n", "4", "--steps", "3", "--seed", "2", "--check", "additivity"],
    );
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["verify", "--theorem", "fw", "--k", "2", "--n", "4", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["verify", "--theorem", "fw", "--k", "2", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["aseries", "--k", "4", "--n", "4", "--order", "1"]).status.code(), Some(2));
    let off = run(&["superpotential", "--k", "2", "--n", "4", "--point", "tests/golden/point_2_4.json", "--q", "0/0"]);
    assert_eq!(off.status.code(), Some(2));
}

#[test]
fn empty_sweep_exits_1() {
    let out = run(&["verify", "--theorem", "fw", "--k", "2", "--n", "4", "--samples", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--theorem", "action", "--k", "2", "--n", "5", "--points", "3", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    let c = run(&[&["--sequential"][..], &args[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
