//! Law reports: the uniform result of every randomized identity check.

use std::fmt;

/// Outcome of checking one law over a batch of samples: the worst defect
/// observed, the inputs that produced it, and the pass/fail verdict against
/// the tolerance the law was checked at.
#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn new(law: impl Into<String>, tolerance: f64) -> Self {
        LawReport {
            law: law.into(),
            samples: 0,
            max_defect: 0.0,
            tolerance,
            passed: true,
            witness: None,
        }
    }

    /// Record one sample; keeps the witness of the worst defect seen.
    pub fn record(&mut self, defect: f64, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if defect > self.max_defect || (self.samples == 1 && defect > 0.0) {
            self.max_defect = defect;
            if defect > self.tolerance {
                self.witness = Some(witness());
            }
        }
        self.passed = self.max_defect <= self.tolerance;
    }

    /// Record a boolean law (defect 0 or 1).
    pub fn record_bool(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.record(if holds { 0.0 } else { 1.0 }, witness);
    }

    /// Merge batches of the same law (associative max/concat).
    pub fn merge(&mut self, other: &LawReport) {
        assert_eq!(self.law, other.law);
        self.samples += other.samples;
        if other.max_defect > self.max_defect {
            self.max_defect = other.max_defect;
            self.witness = other.witness.clone();
        }
        self.passed = self.max_defect <= self.tolerance;
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<44} {:>5} samples  max defect {:>12.3e}  tol {:>9.1e}  {}",
            self.law,
            self.samples,
            self.max_defect,
            self.tolerance,
            if self.passed { "ok" } else { "FAIL" }
        )
    }
}

/// True iff every report in the batch passed.
pub fn all_passed(reports: &[LawReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
