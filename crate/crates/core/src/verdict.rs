//! Three-valued certification verdicts shared by the condition checkers.
//!
//! Every verdict is sample-level: "certified_on_sample" means the condition
//! held on every enumerated element up to the stated word length, never a
//! global proof.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "WU")]
    WeaklyUnipotent,
    #[serde(rename = "GP")]
    GenericProper,
    #[serde(rename = "GP+")]
    PositiveGenericProper,
    #[serde(rename = "Tr")]
    TopRow,
    #[serde(rename = "TRe")]
    TopRightEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    CertifiedOnSample,
    RefutedOnSample,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleMeta {
    #[serde(rename = "L")]
    pub max_length: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub status: VerdictStatus,
    /// Witness, infeasibility record, offending entries, or a reason string.
    pub certificate: serde_json::Value,
    pub sample: SampleMeta,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub evidence: serde_json::Value,
}

impl ConditionVerdict {
    pub fn certified(&self) -> bool {
        self.status == VerdictStatus::CertifiedOnSample
    }

    pub fn refuted(&self) -> bool {
        self.status == VerdictStatus::RefutedOnSample
    }
}

/// Headline classification produced from the five condition verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolonomySummary {
    RoundCandidate,
    StrictlyConvexCandidate,
    PreservesDomainCandidate,
    None,
}
