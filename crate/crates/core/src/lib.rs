//! Test and evaluation toolkit for indoor localization and tracking systems (LTS).
//!
//! The crate is organised along the evaluation pipeline:
//!
//! - [`trajectory`]: poses, trajectories, interpolation, velocity, evaluation-pose
//!   visit detection and time-based LTS sample matching.
//! - [`alignment`]: least-squares rigid alignment between LTS and ground-truth
//!   frames, and clock-offset estimation between the two streams.
//! - [`scenario`]: the test-case model, the standard scenario generators and
//!   test-case validation.
//! - [`testbed`]: a synthetic experiment executor producing ground truth and a
//!   simulated LTS stream under a parameterised error model.
//! - [`metrics`]: the performance metric suite (accuracy, quantiles, latency,
//!   update rate, repeatability, drift, clock offset).
//! - [`requirements`]: quantile-gated application requirements, matching
//!   against performance results and benefit ranking.
//!
//! Units are fixed throughout: millimetres, degrees, seconds (and mm/s).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alignment;
pub mod angle;
pub mod metrics;
pub mod requirements;
pub mod scenario;
pub mod testbed;
pub mod trajectory;

pub use alignment::{AlignmentReport, RigidTransform};
pub use metrics::PerformanceResults;
pub use requirements::{ApplicationProfile, EvaluationResults, Requirement};
pub use scenario::{ScenarioKind, TestCase};
pub use testbed::{ErrorModel, ExperimentData};
pub use trajectory::{Pose, Timestamp, Trajectory};
