//! Seeded experiments over sprinkled causal sets, shared by the `causet`
//! binary and the acceptance tests.

pub mod config;
pub mod experiments;
pub mod result;

pub use config::ExperimentConfig;
pub use experiments::{run, EXPERIMENTS};
pub use result::ExperimentResult;
