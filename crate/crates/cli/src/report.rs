use std::time::Instant;

use serde_json::{json, Map, Value as Json};
use sha2::{Digest, Sha256};

use crate::config::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        }
    }
}

/// Whether the residual must stay below or reach the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub detail: Map<String, Json>,
    pub runtime_ms: Option<u128>,
}

impl Check {
    fn judged(name: impl Into<String>, residual: f64, tolerance: f64, bound: Bound) -> Self {
        let ok = match bound {
            Bound::AtMost => residual <= tolerance,
            Bound::AtLeast => residual >= tolerance,
        };
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual,
            tolerance,
            bound,
            detail: Map::new(),
            runtime_ms: None,
        }
    }

    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::judged(name, residual, tolerance, Bound::AtMost)
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::judged(name, value, threshold, Bound::AtLeast)
    }

    /// Exact equality of integers, recorded as `|got − want| ≤ 0`.
    pub fn exact(name: impl Into<String>, got: i64, want: i64) -> Self {
        Self::at_most(name, (got - want).abs() as f64, 0.0)
            .with("got", json!(got))
            .with("expected", json!(want))
    }

    /// A check that could not be evaluated.
    pub fn errored(name: impl Into<String>, error: impl ToString) -> Self {
        Self {
            status: Status::Fail,
            ..Self::at_most(name, f64::NAN, 0.0)
        }
        .with("error", json!(error.to_string()))
    }

    pub fn with(mut self, key: &str, value: Json) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    pub fn indeterminate(mut self) -> Self {
        self.status = Status::Indeterminate;
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }

    fn to_json(&self) -> Json {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("status".into(), json!(self.status.as_str()));
        m.insert("residual".into(), number(self.residual));
        m.insert("tolerance".into(), number(self.tolerance));
        let bound = match self.bound {
            Bound::AtMost => "at_most",
            Bound::AtLeast => "at_least",
        };
        m.insert("bound".into(), json!(bound));
        if !self.detail.is_empty() {
            m.insert("detail".into(), Json::Object(self.detail.clone()));
        }
        if let Some(ms) = self.runtime_ms {
            m.insert("runtime_ms".into(), json!(ms));
        }
        Json::Object(m)
    }
}

/// Non-finite values are written as strings so the report stays valid JSON.
pub fn number(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// Runs `f`, recording its wall time when `timings` is set.
pub fn timed(timings: bool, f: impl FnOnce() -> Vec<Check>) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = f();
    if timings {
        let ms = start.elapsed().as_millis();
        for c in &mut checks {
            c.runtime_ms = Some(ms);
        }
    }
    checks
}

pub struct Report {
    pub scenario: Scenario,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Indeterminate) {
            Status::Indeterminate
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            _ => 1,
        }
    }

    /// Canonical JSON: object keys sorted, checks in run order.
    pub fn to_json(&self) -> Json {
        let scenario = self.scenario.to_json();
        let hash = hex::encode(Sha256::digest(scenario.to_string().as_bytes()));
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        json!({
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "config_hash": hash,
            "scenario": scenario,
            "status": self.status().as_str(),
            "summary": { "passed": passed, "total": self.checks.len() },
            "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}
