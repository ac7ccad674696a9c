//! Machine-readable reports with a stable schema and deterministic payload.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    /// `pass`, `fail`, or `skipped`
    pub verdict: String,
    pub detail: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            verdict: "pass".into(),
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            verdict: "fail".into(),
            detail: detail.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            verdict: "skipped".into(),
            detail: detail.into(),
        }
    }

    pub fn of(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

/// The deterministic part of a report: identical config and version yield a
/// byte-identical serialization.
#[derive(Debug, Clone, Serialize)]
pub struct Payload {
    pub schema_version: u32,
    pub command: String,
    pub pair: String,
    pub checks: Vec<CheckResult>,
    pub tables: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub payload: Payload,
    /// wall-clock; excluded from determinism guarantees
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: &str, pair: &str) -> Self {
        Report {
            payload: Payload {
                schema_version: SCHEMA_VERSION,
                command: command.into(),
                pair: pair.into(),
                checks: Vec::new(),
                tables: serde_json::Value::Null,
            },
            timing_ms: 0,
        }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.payload.checks.push(c);
    }

    pub fn any_failed(&self) -> bool {
        self.payload.checks.iter().any(|c| c.verdict == "fail")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} :: {}\n",
            self.payload.command, self.payload.pair
        ));
        for c in &self.payload.checks {
            let tag = match c.verdict.as_str() {
                "pass" => "PASS",
                "fail" => "FAIL",
                _ => "SKIP",
            };
            out.push_str(&format!("  [{tag}] {}: {}\n", c.name, c.detail));
        }
        let (pass, fail, skip) = self.payload.checks.iter().fold((0, 0, 0), |acc, c| {
            match c.verdict.as_str() {
                "pass" => (acc.0 + 1, acc.1, acc.2),
                "fail" => (acc.0, acc.1 + 1, acc.2),
                _ => (acc.0, acc.1, acc.2 + 1),
            }
        });
        out.push_str(&format!(
            "  {pass} passed, {fail} failed, {skip} skipped ({} ms)\n",
            self.timing_ms
        ));
        out
    }
}
