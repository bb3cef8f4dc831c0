use crate::config::ExperimentConfig;
use causet::stats::Estimate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A file produced alongside `result.json`.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Everything an experiment reports. Serializes deterministically; wall-clock
/// time is kept out of it and written separately by the binary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub metrics: BTreeMap<String, Estimate>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Names of the accompanying files.
    pub files: Vec<String>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl ExperimentResult {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        ExperimentResult {
            experiment: experiment.to_string(),
            config: config.clone(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            passed: true,
            files: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64, std_error: f64) {
        self.metrics.insert(name.into(), Estimate { value, std_error });
    }

    pub fn exact(&mut self, name: impl Into<String>, value: f64) {
        self.metric(name, value, 0.0);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).map(|e| e.value)
    }

    pub fn artifact(&mut self, name: impl Into<String>, contents: String) {
        let name = name.into();
        self.files.push(name.clone());
        self.artifacts.push(Artifact { name, contents });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results always serialize") + "\n"
    }
}

/// Rows of numbers as CSV with a header line.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",") + "\n";
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// Whitespace-separated columns with a `#` header, as gnuplot reads them.
pub fn dat_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("# {}\n", header.join(" "));
    for r in rows {
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    s
}
