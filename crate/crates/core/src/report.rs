//! Verdicts produced by the checkers, serializable as machine reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub object: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// Fragment bound the verdict was computed at; `None` for exact checks.
    pub bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, object: impl Into<String>, verdict: bool) -> Self {
        Verdict { check: check.into(), object: object.into(), verdict, witness: None, bound: None, note: None }
    }

    pub fn at_bound(mut self, bound: u64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.verdict { "pass" } else { "FAIL" };
        write!(f, "[{status}] {} ({})", self.check, self.object)?;
        if let Some(b) = self.bound {
            write!(f, " at bound {b}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, ": witness {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, other: Report) {
        self.verdicts.extend(other.verdicts);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }

    pub fn get(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    /// Verdict of `check`; panics if the check is absent.
    pub fn passed(&self, check: &str) -> bool {
        self.get(check).unwrap_or_else(|| panic!("no verdict named {check}")).verdict
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.verdict)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
