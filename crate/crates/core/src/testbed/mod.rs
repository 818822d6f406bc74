//! Synthetic experiment execution: noise-free ground truth from a test case
//! and a simulated LTS stream under a parameterised error model.

mod error_model;
mod experiment;
mod gt;
mod lts;

use thiserror::Error;

pub use error_model::ErrorModel;
pub use experiment::{
    run_experiment, run_experiment_at, static_gate_log, ExperimentData, ExperimentManifest,
    StaticGateEntry, DEFAULT_GT_RATE_HZ,
};
pub use gt::{generate_gt, MIN_GT_RATE_HZ, STOP_ACCELERATION_MM_S2};
pub use lts::{emission_schedule, simulate_lts};

use crate::trajectory::TrajectoryError;

#[derive(Debug, Error)]
pub enum TestbedError {
    #[error("waypoint path is degenerate (fewer than two distinct points)")]
    DegeneratePath,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid error model: {0}")]
    InvalidErrorModel(String),

    #[error("test case has validation errors: {}", .0.join("; "))]
    InvalidTestCase(Vec<String>),

    #[error("latency leaves no emittable samples inside the ground truth")]
    NoEmittableSamples,

    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}
