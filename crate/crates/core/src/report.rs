//! PASS/FAIL bookkeeping shared by the degeneration lab and the verification suites.

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Unsupported,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Unsupported => "UNSUPPORTED",
        }
    }
}

/// One checked identity. `anchor` states the identity being checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub passed: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: &str, anchor: &str) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            passed: 0,
            total: 0,
            detail: String::new(),
            counterexample: None,
        }
    }

    /// A single yes/no check.
    pub fn single(name: &str, anchor: &str, ok: bool, detail: impl Into<String>) -> Self {
        let mut c = Self::new(name, anchor);
        c.record(ok, || "see detail".into());
        c.detail = detail.into();
        c
    }

    /// Counts one instance; the first failure keeps its counterexample.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
        self.status = if self.passed == self.total { Status::Pass } else { Status::Fail };
    }

    /// Counts an instance whose computation raised `e`.
    pub fn record_error(&mut self, e: &Error, context: impl FnOnce() -> String) {
        self.record(false, || format!("{}: {e}", context()));
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn skipped(name: &str, anchor: &str, why: impl Into<String>) -> Self {
        let mut c = Self::new(name, anchor);
        c.status = Status::Skip;
        c.detail = why.into();
        c
    }

    pub fn unsupported(name: &str, anchor: &str, why: impl Into<String>) -> Self {
        let mut c = Self::new(name, anchor);
        c.status = Status::Unsupported;
        c.detail = why.into();
        c
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{:<5} {}  [{}]", self.status.label(), self.name, self.anchor);
        if self.total > 0 {
            s.push_str(&format!("  {}/{}", self.passed, self.total));
        }
        if !self.detail.is_empty() {
            for line in self.detail.lines() {
                s.push_str(&format!("\n        {line}"));
            }
        }
        if let Some(c) = &self.counterexample {
            s.push_str(&format!("\n        counterexample: {c}"));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn status(&self) -> Status {
        overall(self.checks.iter().map(|c| c.status))
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("== {} : {}\n", self.suite, self.status().label());
        for c in &self.checks {
            s.push_str(&c.render_text());
            s.push('\n');
        }
        s
    }
}

/// FAIL dominates, then UNSUPPORTED; SKIP alone does not fail a run.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        match s {
            Status::Fail => return Status::Fail,
            Status::Unsupported => out = Status::Unsupported,
            _ => {}
        }
    }
    out
}

/// 0 pass, 1 identity failure, 3 unsupported.
pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Pass | Status::Skip => 0,
        Status::Fail => 1,
        Status::Unsupported => 3,
    }
}
