//! Pass/fail reports shared by the verification routines.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub check_name: String,
    pub pass: bool,
    /// Offending object or rank mismatch; always present on failure.
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Self {
        Check {
            check_name: name.to_string(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Self {
        Check {
            check_name: name.to_string(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    /// A check that does not apply; counts as passing.
    pub fn skipped(name: &str, why: &str) -> Self {
        Check {
            check_name: name.to_string(),
            pass: true,
            witness: Some(format!("skipped: {why}")),
        }
    }

    pub fn from_witness(name: &str, witness: Option<String>) -> Self {
        match witness {
            Some(w) => Check::fail(name, w),
            None => Check::pass(name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.check_name = format!("{prefix}{}", c.check_name);
            self.checks.push(c);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.check_name.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(
                f,
                "{:<width$}  {}",
                c.check_name,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
            if let Some(w) = &c.witness {
                write!(f, "  {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
