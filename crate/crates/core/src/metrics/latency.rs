use super::MetricError;
use crate::trajectory::{estimate_velocity, interpolate_pose, Trajectory};

/// Mean along-track lag of the LTS behind the ground truth, ms.
///
/// For each LTS sample where the ground-truth speed exceeds the threshold,
/// the horizontal offset `gt(t) - lts(t)` is projected onto the direction of
/// motion and divided by the speed. Positive values mean the LTS lags.
pub fn estimate_latency(
    gt: &Trajectory,
    lts: &Trajectory,
    speed_threshold_mm_s: f64,
) -> Result<f64, MetricError> {
    let mut total = 0.0;
    let mut n = 0usize;
    for p in lts.samples() {
        let Ok(v) = estimate_velocity(gt, p.t, 0) else {
            continue;
        };
        let dir = v.vector.xy();
        let speed = dir.norm();
        if !(speed > speed_threshold_mm_s) {
            continue;
        }
        let g = interpolate_pose(gt, p.t)?;
        let along = (g.horizontal() - p.horizontal()).dot(&dir) / speed;
        total += along / speed;
        n += 1;
    }
    if n == 0 {
        return Err(MetricError::InsufficientDynamicSamples);
    }
    Ok(1000.0 * total / n as f64)
}
