//! Structured pass/fail reports for verification suites.
//!
//! Every `verify_*` entry point returns a [`CheckReport`]: a flat,
//! deterministically ordered list of named checks. Callers (tests, the
//! CLI) can print it line by line or just ask [`CheckReport::all_pass`].
//! Checks that are expected to fail for a documented reason can be marked
//! informational so they are reported without failing the suite.

use std::fmt;

use serde::Serialize;

/// One named check with its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    /// Stable, human-readable identifier, e.g. `"rhat.braid.n3"`.
    pub key: String,
    pub pass: bool,
    /// Short explanation; on failure this should pin down the first
    /// offending index or value.
    pub detail: String,
    /// Informational items report an observation (for example a known
    /// basis-convention mismatch) and do not count against `all_pass`.
    pub informational: bool,
}

/// An ordered collection of check outcomes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn push(&mut self, key: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(CheckItem {
            key: key.into(),
            pass,
            detail: detail.into(),
            informational: false,
        });
    }

    /// Adds an observation that never fails the report.
    pub fn push_info(&mut self, key: impl Into<String>, detail: impl Into<String>) {
        self.items.push(CheckItem {
            key: key.into(),
            pass: true,
            detail: detail.into(),
            informational: true,
        });
    }

    /// Records an equality check: passes when the two sides agree.
    pub fn check_eq<T: PartialEq + fmt::Debug>(
        &mut self,
        key: impl Into<String>,
        lhs: &T,
        rhs: &T,
    ) {
        if lhs == rhs {
            self.push(key, true, "equal");
        } else {
            self.push(key, false, format!("left {lhs:?} ≠ right {rhs:?}"));
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn items(&self) -> &[CheckItem] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every non-informational item passed.
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass || i.informational)
    }

    /// The keys of failed checks, for terse assertion messages.
    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items
            .iter()
            .filter(|i| !i.pass && !i.informational)
            .collect()
    }

    /// Panics with a readable summary unless everything passed.
    /// Convenience for tests.
    pub fn assert_all_pass(&self) {
        if !self.all_pass() {
            let mut msg = String::from("failed checks:\n");
            for item in self.failures() {
                msg.push_str(&format!("  {}: {}\n", item.key, item.detail));
            }
            panic!("{msg}");
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let status = if item.informational {
                "info"
            } else if item.pass {
                "pass"
            } else {
                "FAIL"
            };
            writeln!(f, "[{status}] {}: {}", item.key, item.detail)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_ignores_informational() {
        let mut r = CheckReport::new();
        r.push("a", true, "ok");
        r.push_info("b", "known mismatch, documented");
        assert!(r.all_pass());
        r.push("c", false, "boom");
        assert!(!r.all_pass());
        assert_eq!(r.failures().len(), 1);
        assert_eq!(r.failures()[0].key, "c");
    }

    #[test]
    fn display_marks_status() {
        let mut r = CheckReport::new();
        r.push("x.y", true, "equal");
        r.push("x.z", false, "off by q^2");
        let text = r.to_string();
        assert!(text.contains("[pass] x.y"));
        assert!(text.contains("[FAIL] x.z"));
    }
}
