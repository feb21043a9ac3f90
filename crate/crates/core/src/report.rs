//! Pass/fail reports shared by validators, suites and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Value,
}

impl Check {
    pub fn pass(name: impl Into<String>, witness: Value) -> Self {
        Check { name: name.into(), verdict: Verdict::Pass, witness }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Check { name: name.into(), verdict: Verdict::Fail, witness }
    }

    /// Pass when `failure` is `None`; otherwise fail with the given witness.
    pub fn from_failure(name: impl Into<String>, failure: Option<Value>, ok_note: Value) -> Self {
        match failure {
            None => Check::pass(name, ok_note),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Wall-clock time; left `null` unless timing was requested so that
    /// reports stay byte-identical across runs.
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), elapsed_ms: None }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(Check::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
