//! Suite reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub spec: String,
    pub residual_nonzero_entries: Vec<String>,
}

/// Outcome of one identity suite. `failures` is empty exactly when every
/// residual was zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub suite: String,
    pub config: serde_json::Value,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl IdentityReport {
    pub fn new(suite: &str) -> Self {
        IdentityReport {
            suite: suite.to_string(),
            config: serde_json::Value::Null,
            cases: 0,
            failures: Vec::new(),
            seed: 0,
            wall_time_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Counts one case; a nonempty witness list marks it as failed.
    pub fn record(&mut self, spec: impl Into<String>, witness: Vec<String>) {
        self.cases += 1;
        if !witness.is_empty() {
            self.failures.push(Failure {
                spec: spec.into(),
                residual_nonzero_entries: witness,
            });
        }
    }

    /// Records a case whose evaluation itself failed.
    pub fn record_error(&mut self, spec: impl Into<String>, err: &crate::Error) {
        self.record(spec, vec![format!("error: {err}")]);
    }

    /// Canonical failure order, independent of evaluation order.
    pub fn sort_failures(&mut self) {
        self.failures.sort_by(|a, b| a.spec.cmp(&b.spec));
    }

    /// The report with its timing field cleared, for reproducibility checks.
    pub fn without_timing(&self) -> IdentityReport {
        IdentityReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}
