//! Machine-readable report documents. The JSON form round-trips losslessly
//! (serde_json prints shortest representations that parse back to the same
//! doubles), and every document carries a digest of the exact input it was
//! computed from.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conditions::{ConditionReport, MeasurementClass};
use crate::estimation::EstimationReport;
use crate::modelfile::ComplexPair;

/// SHA-256 hex digest of the input bytes, for attributing reports to inputs.
pub fn input_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub seed: u64,
    pub draws: u64,
    pub histogram: Vec<u64>,
    pub exact_probabilities: Vec<f64>,
    pub frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub target: String,
    pub best_state: Vec<ComplexPair>,
    pub best_value: f64,
    pub restarts: usize,
    pub seed: u64,
    pub trace: Vec<f64>,
}

/// The top-level machine report emitted by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub conditions: Vec<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain_consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<MeasurementClass>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimation: Option<EstimationReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sampling: Option<SamplingReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchReport>,
}

impl ReportDocument {
    pub fn new(input_digest: String) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest,
            conditions: Vec::new(),
            chain_consistent: None,
            classification: None,
            estimation: None,
            sampling: None,
            search: None,
        }
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// One row of the builtin-gallery demo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoEntry {
    pub name: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub violations: [f64; 3],
    pub observed: [bool; 3],
    pub declared: [bool; 3],
    pub matches_declared: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub tool_version: String,
    pub entries: Vec<DemoEntry>,
}
