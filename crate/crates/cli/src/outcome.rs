use std::fmt::Write as _;

use hilbheis_core::Error;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Accumulates named checks, JSON sections and table lines for one command.
pub struct Outcome {
    command: &'static str,
    checks: Vec<Check>,
    sections: Map<String, Value>,
    lines: Vec<String>,
    pub report: Value,
    pub table: String,
}

impl Outcome {
    pub fn new(command: &'static str) -> Self {
        Outcome {
            command,
            checks: Vec::new(),
            sections: Map::new(),
            lines: Vec::new(),
            report: Value::Null,
            table: String::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn section<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).expect("report sections serialize");
        self.sections.insert(key.to_string(), v);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Builds the JSON report and the table text.
    pub fn finish(mut self) -> Self {
        let mut report = Map::new();
        report.insert("command".into(), self.command.into());
        report.insert("passed".into(), self.passed().into());
        report.insert("checks".into(), serde_json::to_value(&self.checks).unwrap());
        report.extend(std::mem::take(&mut self.sections));
        self.report = Value::Object(report);

        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut table = String::new();
        for l in &self.lines {
            writeln!(table, "{l}").unwrap();
        }
        if !self.lines.is_empty() && !self.checks.is_empty() {
            table.push('\n');
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(table, "{verdict}  {:width$}  {}", c.name, c.detail).unwrap();
        }
        self.table = table;
        self
    }
}

/// Error exit: 1 for mathematical failures, 2 for I/O, parse and input-spec problems.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const MATH: u8 = 1;
    pub const INPUT: u8 = 2;

    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: Self::INPUT,
            message: message.into(),
        }
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Model(_) | Error::Semigroup(_) | Error::EnumerationCap { .. } => Failure::INPUT,
        _ => Failure::MATH,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: code_for(&e),
            message: e.to_string(),
        }
    }
}
