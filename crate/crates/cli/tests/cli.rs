mod common;

use std::process::Command;

use common::{check_golden, data, golden_cases};

fn exit_code(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_idalg")).args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn golden_reports_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let failures: Vec<String> = golden_cases().iter().filter_map(|c| check_golden(c, dir.path()).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "kind = mahler\nq = 2\nrank = 1\nA[1][1] = (1 + z\n").unwrap();
    let bad = bad.to_str().unwrap();
    let orbit = data("mahler_orbit.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["hasse", "apply", "1", "1 +* z"],
        vec!["hasse", "apply", "1", "1/3", "--p", "3"],
        vec!["hasse", "check", "--p", "9"],
        vec!["hasse", "frobnicate"],
        vec!["idmod", "b1", "--p", "3", "--a0", "0", "--deg", "2"],
        vec!["idmod", "check", "--p", "3"],
        vec!["idmod", "check", "--p", "3", "--digits", "2,1", "--bound", "27"],
        vec!["mahler", "solve", "--file", "/nonexistent/sys.txt"],
        vec!["mahler", "solve", "--file", bad],
        vec!["mahler", "singular", "--file", &orbit, "--alpha", "3/2"],
        vec!["mahler", "singular", "--file", &orbit, "--alpha", "half"],
        vec!["relations", "specialize", "--file", &orbit],
        vec!["--bogus"],
    ];
    for args in cases {
        assert_eq!(exit_code(&args), 2, "{args:?}");
    }
}

#[test]
fn failing_checks_exit_1() {
    assert_eq!(exit_code(&["idmod", "check", "--p", "3", "--digits", "2,1,1", "--bound", "8"]), 1);
    assert_eq!(exit_code(&["mahler", "eval", "--file", &data("mahler_orbit.txt"), "--alpha", "1/2"]), 1);
    assert_eq!(exit_code(&["relations", "specialize", "--file", &data("series.txt"), "--values", "1,2"]), 1);
}

#[test]
fn successful_runs_exit_0() {
    assert_eq!(exit_code(&["hasse", "check", "--p", "3", "--bound", "16"]), 0);
    assert_eq!(exit_code(&["idmod", "b1", "--p", "3", "--a0", "2", "--deg", "3"]), 0);
    assert_eq!(exit_code(&["mahler", "singular", "--file", &data("mahler_orbit.txt"), "--alpha", "1/2"]), 0);
    assert_eq!(exit_code(&["--help"]), 0);
}

#[test]
fn in_process_run_writes_text() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = idalg_cli::run(["idalg", "idmod", "b1", "--p", "3", "--a0", "2", "--deg", "3"], &mut out, &mut err);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("no solutions"), "{text}");
    assert!(err.is_empty());
    let mut out = Vec::new();
    let code = idalg_cli::run(["idalg", "hasse", "apply", "1", "z^"], &mut out, &mut err);
    assert_eq!(code, 2);
    assert!(String::from_utf8(err).unwrap().contains("byte 2"));
}
