use std::fmt::Display;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exact::matrix::Matrix;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Milliseconds, present only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    pub success_rate: f64,
    pub summary: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl ExperimentReport {
    pub fn successes(&self) -> usize {
        self.trials.iter().filter(|t| t.success).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// A matrix as nested arrays of decimal strings, row-major.
pub fn matrix_json<T: Clone + Display + num_traits::Zero + num_traits::One>(m: &Matrix<T>) -> Value {
    Value::Array(m.to_rows().into_iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

pub fn vector_json<T: Display>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}
