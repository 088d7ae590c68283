//! Reconciliation reports: per-state comparisons of two exact values.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rational, BigRational};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StateLine {
    /// Label of the compared item (a coupling, an argument, ...).
    pub coupling: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    /// `lhs / rhs` when the sides differ and both are nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReconciliationReport {
    pub identity: String,
    pub size: usize,
    pub states: Vec<StateLine>,
    pub pass: bool,
    /// Whether a failure indicates a bug (as opposed to a reportable
    /// discrepancy in a conjecture or a printed formula).
    pub theorem_backed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReconciliationReport {
    pub fn new(identity: impl Into<String>, size: usize, theorem_backed: bool) -> Self {
        ReconciliationReport {
            identity: identity.into(),
            size,
            states: Vec::new(),
            pass: true,
            theorem_backed,
            notes: Vec::new(),
        }
    }

    /// Records one comparison; `pass` is the conjunction of all of them.
    pub fn compare(&mut self, label: impl Into<String>, lhs: &BigRational, rhs: &BigRational) -> bool {
        let equal = lhs == rhs;
        let factor = (!equal && !lhs.is_zero() && !rhs.is_zero()).then(|| fmt_rational(&(lhs / rhs)));
        self.states.push(StateLine {
            coupling: label.into(),
            lhs: fmt_rational(lhs),
            rhs: fmt_rational(rhs),
            equal,
            factor,
        });
        self.pass &= equal;
        equal
    }

    /// Records a check without numeric sides.
    pub fn check(&mut self, label: impl Into<String>, ok: bool) -> bool {
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::zero();
        self.compare(label, &one, if ok { &one } else { &zero })
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Whether a failure here should fail a CI gate.
    pub fn is_blocking_failure(&self) -> bool {
        self.theorem_backed && !self.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per state in `label: lhs = rhs` / `lhs != rhs (factor f)` form.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} size {}: {}\n",
            self.identity,
            self.size,
            if self.pass { "pass" } else { "FAIL" }
        );
        for s in &self.states {
            if s.equal {
                out.push_str(&format!("  {}: {} = {}\n", s.coupling, s.lhs, s.rhs));
            } else {
                let f = s.factor.as_deref().map(|f| format!(" (factor {f})")).unwrap_or_default();
                out.push_str(&format!("  {}: {} != {}{f}\n", s.coupling, s.lhs, s.rhs));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn factor_and_pass() {
        let mut r = ReconciliationReport::new("demo", 1, true);
        assert!(r.compare("a", &rat(3, 1), &rat(3, 1)));
        assert!(r.pass);
        assert!(!r.compare("b", &rat(3, 2), &rat(3, 1)));
        assert!(!r.pass && r.is_blocking_failure());
        assert_eq!(r.states[1].factor.as_deref(), Some("1/2"));
        assert_eq!(r.states[0].factor, None);
    }

    #[test]
    fn json_round_trip() {
        let mut r = ReconciliationReport::new("demo", 2, false);
        r.compare("x", &rat(1, 3), &rat(2, 3));
        r.note("informational");
        let back: ReconciliationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"lhs\": \"1/3\""));
    }
}
