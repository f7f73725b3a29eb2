//! Experiment plans and runners behind the `psnlse` command.

pub mod config;
pub mod experiments;

pub use config::{ExperimentPlan, MethodKind, RunPoint};
