//! Structured pass/fail evidence produced by every numerical certificate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One offending index tuple together with its residual or a reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub key: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub check: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(check: impl Into<String>, tolerance: f64) -> Self {
        Self { check: check.into(), passed: true, worst_residual: 0.0, tolerance, violations: Vec::new() }
    }

    /// Folds a residual into the report; anything above tolerance becomes a violation.
    pub fn record(&mut self, key: Vec<usize>, residual: f64, reason: impl Into<String>) {
        // NaN must count as a failure
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if residual > self.worst_residual {
            self.worst_residual = residual;
        }
        if residual > self.tolerance {
            self.violations.push(Violation { key, residual: Some(residual), reason: reason.into() });
        }
        self.refresh();
    }

    /// Records a combinatorial failure that has no numeric residual.
    pub fn violate(&mut self, key: Vec<usize>, reason: impl Into<String>) {
        self.violations.push(Violation { key, residual: None, reason: reason.into() });
        self.refresh();
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.worst_residual = self.worst_residual.max(other.worst_residual);
        self.violations.extend(other.violations);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.passed = self.violations.is_empty() && self.worst_residual <= self.tolerance;
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {:<6} worst_residual={:.3e} tol={:.1e} violations={}",
            self.check,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst_residual,
            self.tolerance,
            self.violations.len()
        )
    }
}
