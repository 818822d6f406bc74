//! Poses, trajectories and the GT/LTS sample association pipeline.
//!
//! Ground truth is treated as piecewise linear between its samples: position
//! is interpolated per axis, heading along the shortest arc and quaternions by
//! slerp. Evaluation-pose visits are found analytically on that interpolant.

mod interpolate;
pub mod io;
mod matching;
mod pose;
mod velocity;
mod visits;

use thiserror::Error;

pub use interpolate::interpolate_pose;
pub use matching::{match_lts, MatchOutcome, MatchedSample, MissedVisit};
pub use pose::{Capabilities, Pose, Source, Timestamp, Trajectory};
pub use velocity::{estimate_velocity, segment_speed, Velocity};
pub use visits::{find_visits, tolerance_intervals, EvaluationPose, ToleranceInterval, Visit};

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("invalid pose at {t}: {reason}")]
    InvalidPose { t: Timestamp, reason: String },

    #[error("timestamps not strictly increasing at sample {index}")]
    NonIncreasingTime { index: usize },

    #[error("sample {index} carries different optional fields than the first sample")]
    InconsistentCapabilities { index: usize },

    #[error("trajectory needs at least {needed} samples, has {got}")]
    TooShort { needed: usize, got: usize },

    #[error("refusing to extrapolate: {t} outside [{first}, {last}]")]
    Extrapolation {
        t: Timestamp,
        first: Timestamp,
        last: Timestamp,
    },

    #[error("velocity needs samples on both sides of {t}")]
    Boundary { t: Timestamp },

    #[error("max_match_gap_s must be positive, got {0}")]
    InvalidMatchGap(f64),

    #[error("trajectory CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("trajectory CSV row {row}: {reason}")]
    CsvRow { row: usize, reason: String },
}
