//! The seeded experiments behind each subcommand.

mod ck;
mod gh;
mod reconstruct;
mod thm2;
mod thm3;
mod thm4;
mod volume_law;

pub use ck::cmd_ck;
pub use gh::cmd_gh;
pub use reconstruct::cmd_reconstruct;
pub use thm2::{cmd_thm2, needle_construction, NeedleConstruction};
pub use thm3::cmd_thm3;
pub use thm4::cmd_thm4;
pub use volume_law::cmd_volume_law;

use crate::config::ExperimentConfig;
use crate::result::ExperimentResult;
use causet::spacetime::{Model, ModelSpec};
use causet::{Error, Result};

pub const EXPERIMENTS: [&str; 7] = ["ck", "thm2", "thm3", "thm4", "volume-law", "reconstruct", "gh"];

/// Runs the named experiment.
pub fn run(name: &str, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.check_experiment(name)?;
    match name {
        "ck" => cmd_ck(config),
        "thm2" => cmd_thm2(config),
        "thm3" => cmd_thm3(config),
        "thm4" => cmd_thm4(config),
        "volume-law" => cmd_volume_law(config),
        "reconstruct" => cmd_reconstruct(config),
        "gh" => cmd_gh(config),
        other => Err(Error::Config(format!("unknown experiment `{other}`"))),
    }
}

fn build(spec: &ModelSpec) -> Result<Model> {
    spec.build().map_err(|e| Error::Config(format!("invalid model spec {spec:?}: {e}")))
}

fn model_or(config: &ExperimentConfig, default: ModelSpec) -> Result<Model> {
    build(config.model.as_ref().unwrap_or(&default))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}
