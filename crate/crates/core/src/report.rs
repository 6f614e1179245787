//! Named verification verdicts.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    /// Empty when the check holds; otherwise a residual summary or error.
    pub detail: String,
    pub ms: u128,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), holds, detail: detail.into(), ms: 0 }
    }

    /// Runs `f`, timing it; errors become failed checks.
    pub fn run<F: FnOnce() -> Result<(bool, String)>>(name: impl Into<String>, f: F) -> Self {
        let t = Instant::now();
        let (holds, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, e.to_string()),
        };
        Check { name: name.into(), holds, detail, ms: t.elapsed().as_millis() }
    }

    /// A check that a residual vanishes.
    pub fn zero<T: fmt::Display, F: FnOnce() -> Result<(bool, T)>>(name: impl Into<String>, f: F) -> Self {
        Check::run(name, || {
            let (z, r) = f()?;
            Ok((z, if z { String::new() } else { truncate(&r.to_string()) }))
        })
    }
}

pub fn truncate(s: &str) -> String {
    const MAX: usize = 200;
    if s.chars().count() <= MAX {
        s.to_string()
    } else {
        format!("{}…", s.chars().take(MAX).collect::<String>())
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds" } else { "FAILS" };
        write!(f, "{verdict:5}  {} ({} ms)", self.name, self.ms)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}
