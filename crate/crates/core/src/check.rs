//! Outcome records produced by every verification routine.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::ratio::{ExactRatio, Relation};

/// Outcome of a single check.
///
/// `ViolationAtSmallN` is reserved for bounds that are only claimed for sufficiently
/// large parameters; it never makes a run fail. Identities are always `Pass` or `Fail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ViolationAtSmallN,
    Skipped,
    Statistical,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ViolationAtSmallN => "violation-at-small-n",
            Status::Skipped => "skipped",
            Status::Statistical => "statistical",
        }
    }
}

/// Whether a failed comparison is a hard failure or an expected small-size finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// Unconditional statement: any mismatch fails the run.
    Identity,
    /// Statement proven only for large parameters: mismatches are recorded as findings.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<ExactRatio>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<ExactRatio>,
    pub witness: Value,
}

impl CheckResult {
    fn base(check_id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        CheckResult {
            check_id: check_id.into(),
            anchor: anchor.into(),
            status,
            lhs: None,
            relation: None,
            rhs: None,
            witness: Value::Object(Map::new()),
        }
    }

    /// Compares `lhs rel rhs` exactly.
    pub fn compare(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        lhs: ExactRatio,
        relation: Relation,
        rhs: ExactRatio,
        strictness: Strictness,
    ) -> Self {
        let status = if relation.holds(&lhs, &rhs) {
            Status::Pass
        } else {
            match strictness {
                Strictness::Identity => Status::Fail,
                Strictness::Asymptotic => Status::ViolationAtSmallN,
            }
        };
        let mut r = Self::base(check_id, anchor, status);
        r.lhs = Some(lhs);
        r.relation = Some(relation);
        r.rhs = Some(rhs);
        r
    }

    /// Records a boolean predicate; a false predicate fails.
    pub fn predicate(check_id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::base(check_id, anchor, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn skipped(check_id: impl Into<String>, anchor: impl Into<String>, reason: &str) -> Self {
        Self::base(check_id, anchor, Status::Skipped).with("reason", reason)
    }

    pub fn statistical(check_id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self::base(check_id, anchor, Status::Statistical)
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// Adds a witness field. Keys are kept sorted, so serialization is stable.
    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut self.witness {
            map.insert(key.to_string(), v);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// A failure with no witness would be useless to a reader; fill in both sides at least.
    pub(crate) fn ensure_witness(mut self) -> Self {
        let empty = matches!(&self.witness, Value::Object(m) if m.is_empty());
        if self.status == Status::Fail && empty {
            let lhs = self.lhs.as_ref().map(|r| r.to_string());
            let rhs = self.rhs.as_ref().map(|r| r.to_string());
            self = self.with("lhs", lhs).with("rhs", rhs);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_statuses() {
        let a = ExactRatio::new(1, 5);
        let b = ExactRatio::new(5, 32);
        let ok = CheckResult::compare("x", "a", a.clone(), Relation::Ge, b.clone(), Strictness::Identity);
        assert_eq!(ok.status, Status::Pass);
        let bad = CheckResult::compare("x", "a", b.clone(), Relation::Ge, a.clone(), Strictness::Asymptotic);
        assert_eq!(bad.status, Status::ViolationAtSmallN);
        assert!(bad.passed());
        let hard = CheckResult::compare("x", "a", b, Relation::Ge, a, Strictness::Identity).ensure_witness();
        assert_eq!(hard.status, Status::Fail);
        assert!(hard.witness.get("lhs").is_some());
    }

    #[test]
    fn status_serializes_kebab() {
        let s = serde_json::to_string(&Status::ViolationAtSmallN).unwrap();
        assert_eq!(s, "\"violation-at-small-n\"");
    }
}
