//! Rigid coordinate alignment between LTS and ground-truth frames, and
//! clock-offset estimation between the two streams.

mod rigid;
mod time_offset;
mod transform;

use thiserror::Error;

pub use rigid::{align_rigid, AlignmentReport};
pub use time_offset::{estimate_time_offset, OffsetConfig, TimeOffsetEstimate};
pub use transform::{apply_transform, AlignMode, RigidTransform, Rotation};

use crate::trajectory::TrajectoryError;

#[derive(Debug, Error)]
pub enum AlignmentError {
    #[error("alignment needs at least {needed} pairs, got {got}")]
    TooFewPairs { needed: usize, got: usize },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time offset unobservable: {0}")]
    Unobservable(String),

    #[error("no LTS samples overlap the ground truth across the whole search window")]
    InsufficientOverlap,

    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}
