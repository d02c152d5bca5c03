//! Law-check reports shared by every harness.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: usize,
    /// Largest residual seen; zero for exact checks.
    pub residual: f64,
    /// Human-readable counterexample for the first failure.
    pub witness: Option<String>,
}

impl LawCheck {
    pub fn new(law: impl Into<String>) -> Self {
        LawCheck { law: law.into(), passed: true, checked: 0, residual: 0.0, witness: None }
    }

    /// Record one instance with residual `r` against tolerance `tol`.
    pub fn observe(&mut self, r: f64, tol: f64, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if r > self.residual || r.is_nan() {
            self.residual = r;
        }
        if !(r <= tol) && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    /// Record one exact boolean instance.
    pub fn holds(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }
}

/// Ordered collection of law checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<LawCheck>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, c: LawCheck) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
