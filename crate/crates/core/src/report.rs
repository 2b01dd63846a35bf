//! The JSON document every command emits.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Command-specific settings (trial counts, sample class, ...).
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub settings: Value,
}

impl RunConfig {
    pub fn new(tolerances: Tolerances) -> Self {
        Self {
            tolerances,
            seed: None,
            settings: Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// The command line, as given.
    pub command: Vec<String>,
    pub config: RunConfig,
    pub results: Value,
    pub duration_ms: f64,
}

impl RunReport {
    /// Everything except the wall-clock time, which is the only part allowed
    /// to differ between identical runs.
    pub fn replay_key(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "config": self.config,
            "results": self.results,
        })
    }
}
