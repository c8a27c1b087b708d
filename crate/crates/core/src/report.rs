//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::lattice::Verdict;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, details: impl Into<String>) -> Self {
        Check { name: name.into(), status, details: details.into(), witness: None }
    }

    pub fn expect(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        Self::new(name, Status::from_bool(ok), details)
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub suite: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub runtime_ms: u64,
    pub constants: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        CheckReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            checks: Vec::new(),
            seed,
            runtime_ms: 0,
            constants: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn constant(&mut self, name: &str, value: impl ToString) {
        self.constants.insert(name.to_string(), value.to_string());
    }

    /// Appends another report's checks and constants.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
        self.constants.extend(other.constants);
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_failures())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {}, {} ms)", self.suite, self.seed, self.runtime_ms)?;
        for c in &self.checks {
            if c.details.is_empty() {
                writeln!(f, "{:<12} {}", c.status.label(), c.name)?;
            } else {
                writeln!(f, "{:<12} {}: {}", c.status.label(), c.name, c.details)?;
            }
        }
        for (k, v) in &self.constants {
            writeln!(f, "constant {k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = CheckReport::new("x", 0);
        r.push(Check::new("a", Status::Inconclusive, ""));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::expect("b", false, ""));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_shape() {
        let mut r = CheckReport::new("dims", 3);
        r.push(Check::expect("w", true, "ok").with_witness(serde_json::json!([1, 2])));
        r.push(Check::expect("v", true, "ok"));
        r.constant("c", 6);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["suite"], "dims");
        assert_eq!(v["seed"], 3);
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][0]["witness"][1], 2);
        assert!(v["checks"][1].get("witness").is_none());
        assert_eq!(v["constants"]["c"], "6");
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
    }
}
