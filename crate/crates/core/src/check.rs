//! Named inequality checks with signed margins.
//!
//! Quantities that are exact in binary floating point (set measures,
//! integer frequencies) are compared as is. Everything computed through
//! floating-point sums gets an absolute slack of [`FLOAT_SLACK`].

use std::fmt;

use serde::{Deserialize, Serialize};

pub const FLOAT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Lt,
    Le,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Passed,
    Failed,
    /// Condition the active mode does not claim (e.g. spherical sums
    /// in rectangular-only mode).
    NotClaimed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub exact: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, bound: f64, relation: Relation, exact: bool) -> Self {
        let slack = if exact { 0.0 } else { FLOAT_SLACK };
        let ok = match relation {
            Relation::Lt => value < bound + slack,
            Relation::Le => value <= bound + slack,
        };
        Check {
            name: name.into(),
            // empty float sums are -0.0
            value: value + 0.0,
            bound,
            relation,
            exact,
            status: if ok { Status::Passed } else { Status::Failed },
            note: None,
        }
    }

    /// `value < bound` for a floating-point quantity.
    pub fn lt(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, bound, Relation::Lt, false)
    }

    /// `value < bound` for an exactly representable quantity.
    pub fn lt_exact(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, bound, Relation::Lt, true)
    }

    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, bound, Relation::Le, false)
    }

    pub fn le_exact(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, bound, Relation::Le, true)
    }

    /// A structural yes/no condition, recorded as `0 ≤ 0` or `1 ≤ 0`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::le_exact(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn not_claimed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            value: 0.0,
            bound: 0.0,
            relation: Relation::Le,
            exact: true,
            status: Status::NotClaimed,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// `bound − value`; nonnegative (or positive, for strict relations)
    /// when the check passes.
    pub fn margin(&self) -> f64 {
        self.bound - self.value
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Lt => "<",
            Relation::Le => "<=",
        };
        let status = match self.status {
            Status::Passed => "ok",
            Status::Failed => "FAILED",
            Status::NotClaimed => "not claimed",
        };
        write!(
            f,
            "{:<28} {:>13.6e} {:<2} {:>13.6e}  margin {:>+13.6e}  {}",
            self.name,
            self.value,
            rel,
            self.bound,
            self.margin(),
            status
        )?;
        if let Some(note) = &self.note {
            write!(f, "  ({note})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends `other`'s checks with names prefixed by `prefix/`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &Report) {
        for c in &other.checks {
            let mut c = c.clone();
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
