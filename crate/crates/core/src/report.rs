//! Identity-check records and the machine-readable report that collects them.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exact::BigRational;
use crate::hp::HpReal;

/// One identity check: two sides, their gap and the admitted tolerance.
///
/// Exact checks record `diff` as `"0"` (equal) or `"1"` (different) and a
/// tolerance of `"0"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
    pub tol: String,
    pub pass: bool,
}

impl Check {
    pub fn exact(id: impl Into<String>, anchor: &str, lhs: &BigRational, rhs: &BigRational) -> Self {
        let equal = lhs == rhs;
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            diff: if equal { "0" } else { "1" }.to_string(),
            tol: "0".to_string(),
            pass: equal,
        }
    }

    /// Passes iff `|lhs - rhs| <= tol`. Sides are printed with `digits` significant digits.
    pub fn numeric(id: impl Into<String>, anchor: &str, lhs: &HpReal, rhs: &HpReal, tol: f64, digits: usize) -> Self {
        let diff = (lhs - rhs).abs();
        let d = diff.to_f64();
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            lhs: lhs.to_decimal(digits),
            rhs: rhs.to_decimal(digits),
            diff: format!("{d:.3e}"),
            tol: format!("{tol:.3e}"),
            pass: d <= tol,
        }
    }

    /// A check whose verdict was decided elsewhere (for example an upper bound).
    pub fn verdict(id: impl Into<String>, anchor: &str, lhs: String, rhs: String, diff: f64, tol: f64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            lhs,
            rhs,
            diff: format!("{diff:.3e}"),
            tol: format!("{tol:.3e}"),
            pass: diff <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Run-specific data such as timestamps; not part of the deterministic payload.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            config: Value::Null,
            checks: Vec::new(),
            summary: Summary::default(),
            metadata: None,
        }
    }

    pub fn with_config(mut self, config: Value) -> Self {
        self.config = config;
        self
    }

    pub fn push(&mut self, check: Check) {
        if check.pass {
            self.summary.pass += 1;
        } else {
            self.summary.fail += 1;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    /// Orders checks by id so output does not depend on completion order.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
