//! Test-case model, generators for the standard scenarios, and validation.

mod generator;
mod testcase;
mod validate;

use thiserror::Error;

pub use generator::{build_scenario, ScenarioParams};
pub use testcase::{
    Area, Conditions, ScenarioKind, TestCase, Waypoint, DEFAULT_DWELL_S,
    DEFAULT_NOMINAL_SPEED_MM_S,
};
pub use validate::{
    validate_test_case, ValidationReport, GT_ACCURACY_RATIO, MAX_RECOMMENDED_POSES,
    MIN_RECOMMENDED_POSES,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario parameters: {0}")]
    Parameter(String),
}
