//! Machine-readable verification results.

use serde::{Deserialize, Serialize};

use crate::polyring::Poly;
use crate::xfamily::{FamilyKey, KeyJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Eigen,
    Factorization,
    Intertwining,
    Recursion,
    Degree,
    Orthogonality,
    Admissibility,
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub identity: String,
    pub key: KeyJson,
    pub i: Option<usize>,
    pub pass: bool,
    pub counterexample_probe: Option<Poly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn new(kind: CheckKind, identity: impl Into<String>, key: &FamilyKey, i: Option<usize>, pass: bool) -> Self {
        CheckReport {
            kind,
            identity: identity.into(),
            key: key.into(),
            i,
            pass,
            counterexample_probe: None,
            detail: None,
        }
    }

    pub fn with_probe(mut self, probe: Option<Poly>) -> Self {
        self.counterexample_probe = probe;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
