//! Experiment configuration files.
//!
//! A config is a small TOML document: top-level keys shared by all
//! experiments, `[model]` / `[model_y]` blocks, and one optional section per
//! experiment. Unknown keys are rejected so typos surface with their line.
//!
//! ```text
//! seed = 7
//! K = 3
//! n_trials = 100000
//!
//! [model]
//! kind = "flat_cylinder"
//! T = 10.0
//!
//! [thm3]
//! T_values = [10.0, 100.0, 1000.0]
//! ```

use causet::spacetime::ModelSpec;
use causet::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; when present it must match the subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_mc: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub net_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_y: Option<ModelSpec>,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub thm2: Thm2Params,
    #[serde(default)]
    pub thm3: Thm3Params,
    #[serde(default)]
    pub thm4: Thm4Params,
    #[serde(default)]
    pub volume_law: VolumeLawParams,
    #[serde(default)]
    pub reconstruct: ReconstructParams,
}

fn default_seed() -> u64 {
    1
}

/// Multipliers applied to reported standard errors in pass/fail checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub sigmas: f64,
    pub triangle_sigmas: f64,
    pub pass_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sigmas: 4.0, triangle_sigmas: 3.0, pass_fraction: 0.95 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thm2Params {
    pub epsilon: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub v: f64,
    /// Height of the base cylinder.
    #[serde(rename = "T")]
    pub extent: f64,
    /// Overrides the constructed conformal factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl Default for Thm2Params {
    fn default() -> Self {
        Thm2Params { epsilon: 0.5, d: 10.0, v: 0.05, extent: 1.0, lambda: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thm3Params {
    #[serde(rename = "T_values")]
    pub t_values: Vec<f64>,
    /// Spatial dimension of the cylinders.
    pub n: usize,
    /// Extra K values for the E-versus-K table (at the first T).
    #[serde(rename = "K_values")]
    pub k_values: Vec<usize>,
}

impl Default for Thm3Params {
    fn default() -> Self {
        Thm3Params { t_values: vec![10.0, 100.0, 1000.0], n: 1, k_values: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thm4Params {
    pub repeats: u64,
    pub n_probes: usize,
    pub quadruples: usize,
    /// Box half-size for the partner-net jitter, as a fraction of each chart side.
    pub jitter: f64,
    pub independent_budget: u64,
}

impl Default for Thm4Params {
    fn default() -> Self {
        Thm4Params { repeats: 20, n_probes: 200, quadruples: 100, jitter: 0.02, independent_budget: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VolumeLawParams {
    pub n: usize,
    pub diamonds: usize,
    pub min_volume: f64,
    /// Models to test; defaults to the square and the unit cylinder.
    pub models: Vec<ModelSpec>,
}

impl Default for VolumeLawParams {
    fn default() -> Self {
        VolumeLawParams { n: 100_000, diamonds: 20, min_volume: 0.01, models: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructParams {
    pub prefixes: Vec<usize>,
    pub diamonds: usize,
    pub min_volume: f64,
    /// Diamond endpoints are taken from this many leading sequence points.
    pub anchor_pool: usize,
}

impl Default for ReconstructParams {
    fn default() -> Self {
        ReconstructParams { prefixes: vec![100, 1_000, 10_000, 100_000], diamonds: 20, min_volume: 0.05, anchor_pool: 100 }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config is valid")
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn check_experiment(&self, name: &str) -> Result<()> {
        match &self.experiment {
            Some(e) if e != name => Err(Error::Config(format!("config is for `{e}`, not `{name}`"))),
            _ => Ok(()),
        }
    }
}
