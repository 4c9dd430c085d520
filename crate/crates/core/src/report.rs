//! Structured pass/fail records for identity checks.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// Failure witnesses kept per report; the total count is always exact.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// A proved identity; failure means a bug.
    Asserted,
    /// Data for a conjectured statement; failure is a finding, not an error.
    Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub kind: CheckKind,
    pub inputs: BTreeMap<String, String>,
    pub passed: bool,
    pub cases: usize,
    /// Cases that hold trivially (both sides identically zero).
    pub vacuous: usize,
    pub failure_count: usize,
    pub failures: Vec<Witness>,
    pub notes: Vec<String>,
    /// Wall time; not serialized so that reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    started: Option<Instant>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, kind: CheckKind) -> Self {
        Self {
            check: check.into(),
            kind,
            inputs: BTreeMap::new(),
            passed: true,
            cases: 0,
            vacuous: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
            started: Some(Instant::now()),
        }
    }

    pub fn asserted(check: impl Into<String>) -> Self {
        Self::new(check, CheckKind::Asserted)
    }

    pub fn evidence(check: impl Into<String>) -> Self {
        Self::new(check, CheckKind::Evidence)
    }

    pub fn with_input(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Records one case. The witness closure runs only on failure.
    pub fn record<L, R>(&mut self, case: impl fmt::Display, ok: bool, witness: impl FnOnce() -> (L, R))
    where
        L: fmt::Display,
        R: fmt::Display,
    {
        self.cases += 1;
        if !ok {
            self.fail(case, witness);
        }
    }

    pub fn record_vacuous(&mut self) {
        self.cases += 1;
        self.vacuous += 1;
    }

    pub fn fail<L, R>(&mut self, case: impl fmt::Display, witness: impl FnOnce() -> (L, R))
    where
        L: fmt::Display,
        R: fmt::Display,
    {
        self.passed = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            let (lhs, rhs) = witness();
            self.failures.push(Witness {
                case: case.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds another report's cases into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.vacuous += other.vacuous;
        self.failure_count += other.failure_count;
        self.passed &= other.passed;
        for w in other.failures {
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(Witness {
                    case: format!("{}: {}", other.check, w.case),
                    ..w
                });
            }
        }
        self.notes.extend(other.notes);
    }

    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.elapsed = t.elapsed();
        }
        self
    }

    /// Whether this report should make a verification run fail.
    pub fn blocks(&self) -> bool {
        self.kind == CheckKind::Asserted && !self.passed
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.failures.first()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.kind) {
            (true, _) => "PASS",
            (false, CheckKind::Asserted) => "FAIL",
            (false, CheckKind::Evidence) => "DISAGREE",
        };
        write!(f, "{status} {}", self.check)?;
        for (k, v) in &self.inputs {
            write!(f, " {k}={v}")?;
        }
        write!(f, " cases={}", self.cases)?;
        if self.vacuous > 0 {
            write!(f, " vacuous={}", self.vacuous)?;
        }
        if self.failure_count > 0 {
            write!(f, " failures={}", self.failure_count)?;
        }
        if let Some(w) = self.first_failure() {
            write!(f, " first=[{}: {} != {}]", w.case, w.lhs, w.rhs)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_are_counted_and_capped() {
        let mut r = VerificationReport::asserted("demo").with_input("n", 3);
        for i in 0..20 {
            r.record(i, i % 2 == 0, || (i, i + 1));
        }
        assert!(!r.passed);
        assert_eq!(r.cases, 20);
        assert_eq!(r.failure_count, 10);
        assert_eq!(r.failures.len(), MAX_WITNESSES);
        assert!(r.blocks());
        assert!(r.to_string().starts_with("FAIL demo n=3"));
    }

    #[test]
    fn evidence_never_blocks() {
        let mut r = VerificationReport::evidence("conj");
        r.fail("x", || ("a", "b"));
        assert!(!r.blocks());
        let json = serde_json::to_string(&r.finish()).unwrap();
        assert!(!json.contains("elapsed"));
    }
}
