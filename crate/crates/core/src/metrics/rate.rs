use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpdateRate {
    /// `(n - 1) / (t_last - t_first)`, Hz.
    pub rate_hz: f64,
    /// Longest interval between consecutive samples, s.
    pub max_gap_s: f64,
    pub sample_count: usize,
}

pub fn compute_update_rate(lts: &Trajectory) -> Result<UpdateRate, MetricError> {
    let s = lts.samples();
    if s.len() < 2 {
        return Err(MetricError::InsufficientData(format!(
            "update rate needs 2 samples, got {}",
            s.len()
        )));
    }
    let max_gap_s = s
        .windows(2)
        .map(|w| w[1].t.secs_since(w[0].t))
        .fold(0.0, f64::max);
    Ok(UpdateRate {
        rate_hz: (s.len() - 1) as f64 / lts.duration_s(),
        max_gap_s,
        sample_count: s.len(),
    })
}
