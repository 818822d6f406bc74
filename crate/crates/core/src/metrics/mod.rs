//! Performance metrics: pose errors, quantiles, latency, update rate,
//! repeatability, drift and clock offset, and the evaluation that ties them
//! into a [`PerformanceResults`] record.

mod drift;
mod errors;
mod evaluate;
mod latency;
mod quantile;
mod rate;
mod repeatability;
mod reported;
mod results;

use thiserror::Error;

pub use drift::{compute_drift, Drift, MIN_DRIFT_SAMPLES, MIN_DRIFT_SPAN_S};
pub use errors::{compute_pose_errors, compute_stream_errors, ErrorSample};
pub use evaluate::{evaluate_performance, evaluate_performance_with, EvalConfig};
pub use latency::estimate_latency;
pub use quantile::{min_samples_for, quantile};
pub use rate::{compute_update_rate, UpdateRate};
pub use repeatability::{compute_repeatability, PoseSpread, Repeatability};
pub use reported::{Marker, Reported};
pub use results::{ClockOffset, Distribution, PerformanceResults, QuantileValue, ResultsMetadata};

use crate::trajectory::TrajectoryError;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("quantile must lie strictly between 0 and 1, got {0}")]
    InvalidQuantile(f64),

    #[error("no samples")]
    EmptySamples,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no LTS sample above the speed threshold")]
    InsufficientDynamicSamples,

    #[error("ground truth never reaches any evaluation pose{}", .first_unreached.map(|id| format!(" (first unreached: {id})")).unwrap_or_default())]
    NoVisits { first_unreached: Option<u32> },

    #[error("inputs do not belong together: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}
