use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use quantakit::cli;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn run(args: &[&str]) -> String {
    let mut out = Vec::new();
    let ok = cli::run(std::iter::once("quantakit").chain(args.iter().copied()), &mut out)
        .unwrap_or_else(|e| panic!("{args:?} failed: {e:#}"));
    assert!(ok, "{args:?} reported failures");
    String::from_utf8(out).unwrap()
}

fn run_err(args: &[&str]) -> String {
    let mut out = Vec::new();
    match cli::run(std::iter::once("quantakit").chain(args.iter().copied()), &mut out) {
        Ok(_) => panic!("{args:?} unexpectedly succeeded"),
        Err(e) => format!("{e:#}"),
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quantakit"))
}

#[test]
fn cnot_matrix_matches_golden() {
    let want = fs::read_to_string(fixture("golden/cnot_maxlen2.txt")).unwrap();
    assert_eq!(run(&["matrix", "--step", "cnot", "--maxlen", "2"]), want);
}

#[test]
fn bell_matrix_matches_golden() {
    let want = fs::read_to_string(fixture("golden/bell_maxlen2.txt")).unwrap();
    assert_eq!(run(&["matrix", "--step", "bell", "--maxlen", "2"]), want);
}

#[test]
fn identity_step_dumps_identity() {
    let text = run(&["matrix", "--step", "id", "--maxlen", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "([],0) ([],1) ([0],0) ([0],1) ([1],0) ([1],1)");
    assert_eq!(lines.len(), 7);
    for (i, row) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = row.split_once(": ").unwrap().1.split(' ').collect();
        for (j, c) in cells.iter().enumerate() {
            assert_eq!(*c, if i == j { "1+0i" } else { "0+0i" });
        }
    }
}

#[test]
fn matrix_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let printed = run(&[
        "matrix",
        "--step",
        "cnot",
        "--maxlen",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(printed.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"].as_array().unwrap().len(), 6);
    // ([1],0) and ([1],1) swap
    assert_eq!(v["rows"][4]["label"], "([1],0)");
    assert_eq!(v["rows"][4]["re"][5], 1.0);
}

#[test]
fn matrix_dump_parses_back() {
    let text = run(&["matrix", "--step", "bell", "--maxlen", "2"]);
    let m = quantakit::vecmonad::CMatrix::parse_dump(&text).unwrap();
    assert_eq!(m.dump(), text);
}

#[test]
fn gate_matrix() {
    let text = run(&["matrix", "--gate", "x"]);
    assert_eq!(text, "0 1\n0: 0+0i 1+0i\n1: 1+0i 0+0i\n");
}

#[test]
fn run_prints_amplitudes() {
    let text = run(&["run", "--step", "cnot", "--input", "([1,0],1)"]);
    assert_eq!(text, "([1,0],0): 1+0i\n");
    let twice = run(&["run", "--step", "bell", "--input", "([1,0,0],1)", "--times", "2"]);
    assert_eq!(twice.lines().count(), 4);
}

#[test]
fn run_output_pastes_back_as_input() {
    let text = run(&["run", "--step", "cnot", "--input", "([0,1,1],1)"]);
    let label = text.split(':').next().unwrap();
    let back = run(&["run", "--step", "cnot", "--input", label]);
    assert_eq!(back, "([0,1,1],1): 1+0i\n");
}

#[test]
fn complement_of_xor() {
    let text = run(&["complement", fixture("data/xor.tbl").to_str().unwrap()]);
    assert_eq!(
        text,
        "2 minimal complement(s)\n{(0,0),(0,1)} {(1,0),(1,1)}\n{(0,0),(1,0)} {(0,1),(1,1)}\n"
    );
}

#[test]
fn complement_of_and_as_json() {
    let text = run(&[
        "complement",
        fixture("data/and.tbl").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // and's zeros must sit in three distinct blocks; (1,1) may join any one
    let want = serde_json::json!([
        [["(0,0)", "(1,1)"], ["(0,1)"], ["(1,0)"]],
        [["(0,0)"], ["(0,1)", "(1,1)"], ["(1,0)"]],
        [["(0,0)"], ["(0,1)"], ["(1,0)", "(1,1)"]],
    ]);
    assert_eq!(v, want);
}

#[test]
fn complement_size_limit() {
    let err = run_err(&[
        "complement",
        fixture("data/xor.tbl").to_str().unwrap(),
        "--limit",
        "3",
    ]);
    assert!(err.contains("limit"), "{err}");
}

#[test]
fn synth_single_cx_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("cnot.txt");
    fs::write(&m, run(&["matrix", "--gate", "cnot"])).unwrap();
    let q = dir.path().join("out.qasm");
    let metrics = run(&[
        "synth",
        "--matrix-file",
        m.to_str().unwrap(),
        "--qasm",
        q.to_str().unwrap(),
    ]);
    assert_eq!(metrics, "{\"size\":1,\"cx\":1,\"depth\":1}\n");
    let want = fs::read_to_string(fixture("golden/cnot_gate.qasm")).unwrap();
    assert_eq!(fs::read_to_string(&q).unwrap(), want);
}

#[test]
fn synth_pinned16_and_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("out.qasm");
    let qs = q.to_str().unwrap();
    let metrics = run(&["synth", "--step", "cnot", "--maxlen", "pinned16", "--qasm", qs]);
    let want = fs::read_to_string(fixture("golden/cnot_pinned16_metrics.json")).unwrap();
    assert_eq!(metrics, want);
    assert_eq!(run(&["simulate", qs, "0111"]), "0110\n");
    assert_eq!(run(&["simulate", qs, "0000"]), "0000\n");
}

#[test]
fn synth_without_qasm_prints_it() {
    let text = run(&["synth", "--step", "cnot"]);
    assert!(text.starts_with("OPENQASM 2.0;\n"));
    assert!(text.ends_with("}\n"));
}

#[test]
fn synth_rejects_non_permutations() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("bell.txt");
    fs::write(&m, run(&["matrix", "--gate", "bell"])).unwrap();
    let err = run_err(&["synth", "--matrix-file", m.to_str().unwrap()]);
    assert!(err.contains("permutation"), "{err}");
    let err = run_err(&["synth", "--step", "bell"]);
    assert!(err.contains("outside the basis"), "{err}");
    let err = run_err(&["synth", "--step", "cnot", "--maxlen", "2"]);
    assert!(err.contains("power of two"), "{err}");
}

#[test]
fn check_single_suite() {
    let text = run(&["check", "relalg"]);
    assert!(text.contains("relalg: 13/13 checks passed"), "{text}");
    assert!(text.ends_with("all checks passed\n"));
}

#[test]
fn check_json() {
    let text = run(&["check", "gates", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["suite"], "gates");
    assert!(v[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["failures"] == 0));
}

#[test]
fn errors_are_diagnosed() {
    assert!(run_err(&["matrix", "--step", "nope"]).contains("unknown gate"));
    assert!(run_err(&["matrix", "--step", "ccnot"]).contains("cannot be used as a step"));
    assert!(run_err(&["matrix", "--step", "cnot", "--maxlen", "5"]).contains("cap"));
    assert!(run_err(&["matrix", "--step", "cnot", "--maxlen", "two"]).contains("pinned16"));
    assert!(run_err(&["matrix", "--step", "cnot", "--tol", "0"]).contains("--tol"));
    assert!(run_err(&["run", "--step", "cnot", "--input", "([0,1],"]).contains("parsing --input"));
    assert!(!run_err(&["run", "--step", "cnot", "--input", "([0,1],7)"]).is_empty());
    assert!(run_err(&["check", "nope"]).contains("unknown suite"));
    run_err(&["matrix", "--step", "cnot", "--gate", "x"]);
    run_err(&["matrix"]);
}

#[test]
fn binary_exit_codes() {
    let ok = bin()
        .args(["matrix", "--step", "cnot", "--maxlen", "1"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(ok.stderr.is_empty());

    let bad = bin().args(["matrix", "--step", "nope"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(bad.stdout.is_empty());
    let msg = String::from_utf8(bad.stderr).unwrap();
    assert!(msg.starts_with("quantakit: error:"), "{msg}");

    let usage = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn thread_cap_env() {
    let capped = bin()
        .env(cli::THREADS_ENV, "1")
        .args(["matrix", "--step", "bell", "--maxlen", "2"])
        .output()
        .unwrap();
    assert!(capped.status.success());
    let want = fs::read_to_string(fixture("golden/bell_maxlen2.txt")).unwrap();
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), want);

    let bad = bin()
        .env(cli::THREADS_ENV, "zero")
        .args(["matrix", "--step", "cnot"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn output_is_deterministic() {
    let a = bin()
        .args(["run", "--step", "bell", "--input", "([0,1,1,1],0)"])
        .output()
        .unwrap();
    let b = bin()
        .env(cli::THREADS_ENV, "3")
        .args(["run", "--step", "bell", "--input", "([0,1,1,1],0)"])
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}
