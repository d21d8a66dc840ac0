//! Structured outcome of an exact verification run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// `{identity, parameters, status, checks, first_failure}`; serialised as the
/// CLI's verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    /// Number of individual equalities that were tested.
    pub checks: u64,
    pub first_failure: Option<String>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        VerificationReport {
            identity: identity.into(),
            parameters: BTreeMap::new(),
            status: Status::Pass,
            checks: 0,
            first_failure: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Records one equality; the first failing locus is kept.
    pub fn check(&mut self, ok: bool, locus: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.status = Status::Fail;
            if self.first_failure.is_none() {
                self.first_failure = Some(locus());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds `other` into `self` (first failure wins).
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        if other.status == Status::Fail {
            self.status = Status::Fail;
            if self.first_failure.is_none() {
                self.first_failure = other
                    .first_failure
                    .map(|f| format!("{}: {}", other.identity, f));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_sticky() {
        let mut r = VerificationReport::new("demo").param("k", 10);
        r.check(true, || "a".into());
        r.check(false, || "b".into());
        r.check(false, || "c".into());
        assert!(!r.passed());
        assert_eq!(r.checks, 3);
        assert_eq!(r.first_failure.as_deref(), Some("b"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""status":"fail""#));
    }
}
