use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::config::SuiteConfig;

pub const SCHEMA_VERSION: &str = "report-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub witness: Value,
    /// Only filled in when timings are requested, so reports stay reproducible.
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub generator: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Environment {
        Environment {
            generator: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub config: SuiteConfig,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &SuiteConfig, checks: Vec<CheckRecord>) -> Report {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report {
            schema: SCHEMA_VERSION,
            suite: config.suite.as_str().to_string(),
            config: config.clone(),
            environment: Environment::current(),
            checks,
            summary,
        }
    }

    /// All checks that ran passed.
    pub fn success(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.success() {
            0
        } else {
            1
        }
    }
}

/// What a single check produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub reason: Option<String>,
    pub witness: Value,
}

impl Outcome {
    pub fn verdict(ok: bool, witness: Value) -> Outcome {
        let status = if ok { Status::Pass } else { Status::Fail };
        Outcome { status, reason: None, witness }
    }

    pub fn skipped(reason: impl Into<String>) -> Outcome {
        Outcome { status: Status::Skipped, reason: Some(reason.into()), witness: Value::Null }
    }

    pub fn failed(reason: impl Into<String>) -> Outcome {
        Outcome { status: Status::Fail, reason: Some(reason.into()), witness: Value::Null }
    }
}

/// Collects check records in execution order.
pub struct Recorder {
    timings: bool,
    records: Vec<CheckRecord>,
}

impl Recorder {
    pub fn new(timings: bool) -> Recorder {
        Recorder { timings, records: Vec::new() }
    }

    pub fn run(&mut self, name: String, kind: &str, f: impl FnOnce() -> Outcome) {
        let anchor = crate::anchors::anchor_for(kind).unwrap_or_else(|| panic!("check kind `{kind}` has no anchor"));
        let start = Instant::now();
        let out = f();
        let wall_time_ms = self.timings.then(|| start.elapsed().as_millis() as u64);
        self.records.push(CheckRecord {
            name,
            anchor: anchor.to_string(),
            status: out.status,
            reason: out.reason,
            witness: out.witness,
            wall_time_ms,
        });
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

pub fn to_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

fn md_cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

fn compact(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        other => serde_json::to_string(other).expect("witness serializes"),
    }
}

/// One table per suite section, in check order.
pub fn to_markdown(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Verification report: {}\n", r.suite);
    let _ = writeln!(out, "- schema: `{}`", r.schema);
    let _ = writeln!(out, "- generator: `{}` ({}/{})", r.environment.generator, r.environment.os, r.environment.arch);
    let _ = writeln!(out, "- seed: `{}`", r.config.seed);
    let _ = writeln!(
        out,
        "- summary: {} passed, {} failed, {} skipped\n",
        r.summary.passed, r.summary.failed, r.summary.skipped
    );
    let mut section: Option<&str> = None;
    for c in &r.checks {
        let this = c.name.split('.').next().unwrap_or("");
        if section != Some(this) {
            section = Some(this);
            let _ = writeln!(out, "## {this}\n");
            let _ = writeln!(out, "| check | anchor | status | detail |");
            let _ = writeln!(out, "|---|---|---|---|");
        }
        let mut detail = c.reason.clone().unwrap_or_default();
        let w = compact(&c.witness);
        if !w.is_empty() {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(&w);
        }
        if let Some(ms) = c.wall_time_ms {
            let _ = write!(detail, " ({ms} ms)");
        }
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            md_cell(&c.name),
            md_cell(&c.anchor),
            c.status.as_str(),
            md_cell(&detail)
        );
        if section.is_some() && r.checks.last().is_some_and(|l| std::ptr::eq(l, c)) {
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SuiteId;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new(&SuiteConfig::new(SuiteId::Pindep), Vec::new());
        let v: Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["checks"], Value::Array(Vec::new()));
        assert_eq!(v["schema"], "report-v1");
        assert!(r.success());
        assert!(to_markdown(&r).contains("0 passed, 0 failed, 0 skipped"));
    }

    #[test]
    fn pipes_are_escaped() {
        assert_eq!(md_cell("a|b"), "a\\|b");
    }
}
