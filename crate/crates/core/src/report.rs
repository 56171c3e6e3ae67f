use serde::Serialize;

/// One checked condition, with a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub condition: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(condition: impl Into<String>) -> Check {
        Check { condition: condition.into(), pass: true, witness: None }
    }

    pub fn fail(condition: impl Into<String>, witness: impl Into<String>) -> Check {
        Check { condition: condition.into(), pass: false, witness: Some(witness.into()) }
    }

    /// Passes when `witness` is `None`.
    pub fn from_witness(condition: impl Into<String>, witness: Option<String>) -> Check {
        Check { condition: condition.into(), pass: witness.is_none(), witness }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.pass)
}
