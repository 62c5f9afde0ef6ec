//! Golden-report cases shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use idalg_cli::Report;

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

pub struct Case {
    pub name: &'static str,
    pub args: Vec<String>,
    pub exit: i32,
}

fn case(name: &'static str, args: &[&str], exit: i32) -> Case {
    let args = args.iter().map(|a| a.strip_prefix('@').map_or_else(|| a.to_string(), data)).collect();
    Case { name, args, exit }
}

/// `@file` arguments resolve to `tests/data/file`.
pub fn golden_cases() -> Vec<Case> {
    vec![
        case("hasse_check_p3", &["hasse", "check", "--p", "3", "--bound", "16"], 0),
        case("hasse_apply_p5", &["hasse", "apply", "2", "(1 - t^2)/(1 + t^3)", "--p", "5"], 0),
        case("idmod_b1_p3_a2", &["idmod", "b1", "--p", "3", "--a0", "2", "--deg", "3"], 0),
        case("idmod_b1_p3_a1", &["idmod", "b1", "--p", "3", "--a0", "1", "--deg", "1"], 0),
        case("idmod_example", &["idmod", "example", "--p", "3", "--digits", "2,1,1"], 0),
        case("idmod_check_example", &["idmod", "check", "--p", "3", "--digits", "2,1,1", "--bound", "8", "--order", "64"], 1),
        case("idmod_sections_file", &["idmod", "sections", "--file", "@idmod_example.txt", "--order", "27"], 0),
        case("mahler_solve_product", &["mahler", "solve", "--file", "@mahler_product.txt", "--order", "64"], 0),
        case("mahler_singular_orbit", &["mahler", "singular", "--file", "@mahler_orbit.txt", "--alpha", "1/2"], 0),
        case("mahler_singular_clean", &["mahler", "singular", "--file", "@mahler_orbit.txt", "--alpha", "1/3"], 0),
        case("mahler_eval_rank2", &["mahler", "eval", "--file", "@mahler_rank2.txt", "--alpha", "1/2"], 0),
        case("mahler_eval_singular", &["mahler", "eval", "--file", "@mahler_orbit.txt", "--alpha", "1/2"], 1),
        case("relations_find", &["relations", "find", "--file", "@series.txt", "--deg", "2", "--order", "32"], 0),
        case("relations_specialize", &["relations", "specialize", "--file", "@series.txt", "--alpha", "1/2"], 0),
        case("relations_specialize_fail", &["relations", "specialize", "--file", "@series.txt", "--values", "2,5"], 1),
        case("parse_error", &["hasse", "apply", "1", "1/0"], 2),
    ]
}

/// Runs the binary with `--json` into `dir`; returns (exit code, JSON text).
pub fn run_case(c: &Case, dir: &Path, tag: &str) -> (i32, String) {
    let out = dir.join(format!("{}-{tag}.json", c.name));
    let status = Command::new(env!("CARGO_BIN_EXE_idalg"))
        .args(&c.args)
        .arg("--json")
        .arg(&out)
        .output()
        .expect("binary runs")
        .status;
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (status.code().unwrap_or(-1), text)
}

/// Outcome of one golden comparison; `Err` carries the reason.
pub fn check_golden(c: &Case, dir: &Path) -> Result<(), String> {
    let (code1, a) = run_case(c, dir, "a");
    let (code2, b) = run_case(c, dir, "b");
    if code1 != c.exit || code2 != c.exit {
        return Err(format!("{}: exit codes {code1}/{code2}, expected {}", c.name, c.exit));
    }
    if a != b {
        return Err(format!("{}: reports differ between runs", c.name));
    }
    let report: Report = serde_json::from_str(&a).map_err(|e| format!("{}: report does not parse: {e}", c.name))?;
    if report.exit_code != c.exit {
        return Err(format!("{}: report exit_code {}", c.name, report.exit_code));
    }
    let path = golden_path(c.name);
    if std::env::var_os("IDALG_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &a).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: missing golden file: {e}", c.name))?;
    let expected: Report = serde_json::from_str(&golden).map_err(|e| format!("{}: golden does not parse: {e}", c.name))?;
    if report != expected {
        return Err(format!("{}: report differs from {}", c.name, path.display()));
    }
    Ok(())
}
