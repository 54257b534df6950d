use std::fmt;

use serde::Serialize;

/// Verdict for one lifted-matrix condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRecord {
    pub name: String,
    pub passed: bool,
    /// Largest violation magnitude seen; 0 when the condition holds exactly.
    pub worst_violation: f64,
    /// Index tuple (family positions or inequality index) of the worst violation.
    pub offending: Vec<usize>,
}

/// Condition-by-condition result of a certificate check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub passed: bool,
    pub conditions: Vec<ConditionRecord>,
}

impl CertificateReport {
    pub(crate) fn from_conditions(conditions: Vec<ConditionRecord>) -> Self {
        CertificateReport { passed: conditions.iter().all(|c| c.passed), conditions }
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionRecord> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(
                f,
                "{:<9} {} worst={:e} at {:?}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.worst_violation,
                c.offending
            )?;
        }
        write!(f, "overall   {}", if self.passed { "pass" } else { "FAIL" })
    }
}

/// Tracks the worst violation of a condition while scanning.
pub(crate) struct Tracker {
    name: &'static str,
    tol: f64,
    worst: f64,
    at: Vec<usize>,
}

impl Tracker {
    pub fn new(name: &'static str, tol: f64) -> Self {
        Tracker { name, tol, worst: 0.0, at: Vec::new() }
    }

    /// Records a violation magnitude (nonnegative means violated by that much).
    #[inline]
    pub fn see(&mut self, violation: f64, at: impl FnOnce() -> Vec<usize>) {
        if violation > self.worst {
            self.worst = violation;
            self.at = at();
        }
    }

    /// Passes iff every recorded violation is within `tol`.
    pub fn finish(self) -> ConditionRecord {
        ConditionRecord {
            name: self.name.to_string(),
            passed: self.worst <= self.tol,
            worst_violation: self.worst,
            offending: self.at,
        }
    }

    /// Uses an explicit pass flag instead of the absolute tolerance.
    pub fn finish_with(self, passed: bool) -> ConditionRecord {
        ConditionRecord { name: self.name.to_string(), passed, worst_violation: self.worst, offending: self.at }
    }
}
