//! Machine-readable run summaries.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::experiment::FdfReport;
use crate::params::SaftParams;

/// A measured quantity and the invariant it checks.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub invariant: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
}

impl Residual {
    pub fn new(invariant: &str, value: f64, threshold: Option<f64>) -> Self {
        Residual {
            invariant: invariant.to_string(),
            value,
            threshold,
            pass: threshold.map(|t| value <= t),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub params: Option<SaftParams>,
    pub tolerances: BTreeMap<String, f64>,
    pub residuals: Vec<Residual>,
    pub psnr: Option<FdfReport>,
    /// Command-specific details (coefficients, bounds, grids).
    pub details: BTreeMap<String, serde_json::Value>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn failed(&self) -> bool {
        self.residuals.iter().any(|r| r.pass == Some(false))
    }
}
