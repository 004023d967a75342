//! Verification reports shared by every checker.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The engine could not decide; never counted as a failure.
    Uncertified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Uncertified => "uncertified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// An algebra element in the session expression grammar.
    Element,
    /// A section written as `coeff*basis + ...`.
    Section,
    /// A degree tuple such as `(1,0)`.
    Degree,
}

/// An expression that re-evaluates to the violation a failed check found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub expr: String,
    /// Where the violation was found (basis tuple, sampled inputs, ...).
    pub context: String,
}

impl Witness {
    pub fn element(expr: &str, context: impl Into<String>) -> Self {
        Witness {
            kind: WitnessKind::Element,
            expr: expr.to_string(),
            context: context.into(),
        }
    }

    pub fn section(expr: &str, context: impl Into<String>) -> Self {
        Witness {
            kind: WitnessKind::Section,
            expr: expr.to_string(),
            context: context.into(),
        }
    }

    pub fn degree(expr: &str, context: impl Into<String>) -> Self {
        Witness {
            kind: WitnessKind::Degree,
            expr: expr.to_string(),
            context: context.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub check: String,
    pub target: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Check {
    pub fn pass(check: impl Into<String>, target: impl Into<String>) -> Self {
        Check {
            check: check.into(),
            target: target.into(),
            status: Status::Pass,
            witness: None,
            note: None,
        }
    }

    pub fn fail(check: impl Into<String>, target: impl Into<String>, witness: Witness) -> Self {
        Check {
            check: check.into(),
            target: target.into(),
            status: Status::Fail,
            witness: Some(witness),
            note: None,
        }
    }

    pub fn uncertified(
        check: impl Into<String>,
        target: impl Into<String>,
        note: impl Into<String>,
    ) -> Self {
        Check {
            check: check.into(),
            target: target.into(),
            status: Status::Uncertified,
            witness: None,
            note: Some(note.into()),
        }
    }

    /// `Pass` when `witness` is `None`, `Fail` otherwise.
    pub fn from_witness(
        check: impl Into<String>,
        target: impl Into<String>,
        witness: Option<Witness>,
    ) -> Self {
        match witness {
            None => Check::pass(check, target),
            Some(w) => Check::fail(check, target, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} :: {}", self.status, self.target, self.check)?;
        if let Some(w) = &self.witness {
            write!(f, "\n    witness ({}): {}", w.context, w.expr)?;
        }
        if let Some(n) = &self.note {
            write!(f, "\n    note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// No check failed (uncertified checks do not count as failures).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, check: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn status_of(&self, check: &str) -> Option<Status> {
        self.get(check).map(|c| c.status)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let fails = self.failures().count();
        write!(
            f,
            "summary: {} checks, {} failed -> {}",
            self.checks.len(),
            fails,
            if fails == 0 { "PASS" } else { "FAIL" }
        )
    }
}
