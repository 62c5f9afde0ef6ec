//! Human and machine-readable reports.
//!
//! The JSON document has five top-level fields, all stable:
//! `command`, `status` (`pass` | `fail` | `error`), `exit_code`, `summary`
//! and a command-specific `data` object.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_OK,
            Status::Fail => EXIT_FAIL,
            Status::Error => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub summary: String,
    pub data: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A report plus the extra human-readable lines printed under the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new(command: &str, status: Status, summary: impl Into<String>, data: Value, lines: Vec<String>) -> Self {
        let report = Report { command: command.into(), status, exit_code: status.exit_code(), summary: summary.into(), data };
        Outcome { report, lines }
    }

    pub fn error(command: &str, message: impl Into<String>) -> Self {
        let message = message.into();
        let data = serde_json::json!({ "error": message });
        Outcome::new(command, Status::Error, message, data, Vec::new())
    }

    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    pub fn to_json(&self) -> String {
        self.report.to_json()
    }

    pub fn print(&self, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<()> {
        if self.report.status == Status::Error {
            return writeln!(err, "error: {}", self.report.summary);
        }
        writeln!(out, "{}", self.report.summary)?;
        for l in &self.lines {
            writeln!(out, "  {l}")?;
        }
        Ok(())
    }
}
