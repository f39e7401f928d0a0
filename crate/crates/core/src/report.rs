//! Named pass/fail checks shared by verification routines and reports.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks never affect the overall verdict.
    pub mandatory: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn mandatory(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            mandatory: true,
            detail: detail.into(),
        }
    }

    pub fn informational(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            mandatory: false,
            detail: detail.into(),
        }
    }
}

/// True iff every mandatory check passed.
pub fn all_mandatory_pass(checks: &[Check]) -> bool {
    checks.iter().filter(|c| c.mandatory).all(|c| c.passed)
}
