//! The "cert/1" report: named checks with exact witnesses.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use threefold::certificate::CERT_SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub status: CheckStatus,
    pub checks: Vec<Check>,
    /// Full certificates (and the tower) backing the checks.
    pub details: Vec<Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { schema: CERT_SCHEMA, command: command.into(), params: BTreeMap::new(), status: CheckStatus::Pass, checks: Vec::new(), details: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.into(), value.to_string());
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: impl Into<String>) {
        self.push(name, if passed { CheckStatus::Pass } else { CheckStatus::Fail }, witness);
    }

    pub fn push(&mut self, name: impl Into<String>, status: CheckStatus, witness: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status, witness: witness.into() });
        self.status = overall(&self.checks);
    }

    pub fn detail(&mut self, v: impl Serialize) {
        self.details.push(serde_json::to_value(v).expect("serialisable detail"));
    }

    /// Appends another report's checks (prefixed) and details.
    pub fn absorb(&mut self, other: Report) {
        for c in other.checks {
            self.push(format!("{}: {}", other.command, c.name), c.status, c.witness);
        }
        self.details.extend(other.details);
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

fn overall(checks: &[Check]) -> CheckStatus {
    if checks.iter().any(|c| c.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else if checks.iter().any(|c| c.status == CheckStatus::Inconclusive) {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// JSON omits the wall time so that repeated runs are byte-identical.
pub fn render(report: &Report, format: Format, elapsed: Duration) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "{} {} [{}]", report.schema, report.command, params.join(", "));
            let width = report.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(5).clamp(5, 60);
            let _ = writeln!(s, "{:<width$}  {:<12}  WITNESS", "CHECK", "STATUS");
            for c in &report.checks {
                let _ = writeln!(s, "{:<width$}  {:<12}  {}", c.name, c.status.as_str(), c.witness);
            }
            let _ = writeln!(s, "overall: {}", report.status.as_str());
            let _ = writeln!(s, "wall time: {:.3} s", elapsed.as_secs_f64());
            s
        }
    }
}
