use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One inequality evaluation. `lhs` and `rhs` are the two sides as
/// compared; the witness carries whatever is needed to replay the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    /// Records `lhs >= rhs - slack`.
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        let status = if lhs >= rhs - slack {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            status,
            lhs,
            rhs,
            witness: None,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs,
            rhs,
            witness: None,
        }
    }

    pub fn skipped(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            lhs: 0.0,
            rhs: 0.0,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Attaches the witness only when the check failed.
    pub fn with_witness_on_fail(self, witness: impl FnOnce() -> Value) -> Self {
        if self.status == Status::Fail {
            self.with_witness(witness())
        } else {
            self
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Pass/fail record for a whole suite. `violations` always equals the
/// number of failed checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Map<String, Value>,
    pub seed: u64,
    checks: Vec<CheckRecord>,
    violations: usize,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            params: Map::new(),
            seed,
            checks: Vec::new(),
            violations: 0,
            wall_time_ms: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_owned(), value.into());
    }

    pub fn push(&mut self, check: CheckRecord) {
        if check.failed() {
            self.violations += 1;
        }
        self.checks.push(check);
    }

    pub fn extend<I: IntoIterator<Item = CheckRecord>>(&mut self, checks: I) {
        for c in checks {
            self.push(c);
        }
    }

    /// Appends the checks of `other`. Merging chunk reports produced from
    /// consecutive index ranges, in order, reproduces the single-run report.
    pub fn merge(&mut self, other: VerificationReport) {
        self.extend(other.checks);
    }

    pub fn checks(&self) -> &[CheckRecord] {
        &self.checks
    }

    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn all_passed(&self) -> bool {
        self.violations == 0
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
