use serde::{Deserialize, Serialize};

use crate::angle::shortest_arc;
use crate::trajectory::{
    estimate_velocity, interpolate_pose, MatchedSample, Pose, Timestamp, Trajectory,
};

/// Error of one LTS sample against ground truth, signed as LTS minus GT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSample {
    /// LTS timestamp relative to the start of the ground truth, s.
    pub t_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_pose_id: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visit_index: Option<u32>,
    pub ex_mm: f64,
    pub ey_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ez_mm: Option<f64>,
    pub horizontal_mm: f64,
    /// Signed yaw error in `(-180, 180]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_deg: Option<f64>,
    pub gt_speed_mm_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_yaw_deg: Option<f64>,
}

impl ErrorSample {
    pub fn vertical_mm(&self) -> Option<f64> {
        self.ez_mm.map(f64::abs)
    }

    /// Absolute yaw error in `[0, 180]`.
    pub fn abs_orientation_deg(&self) -> Option<f64> {
        self.orientation_deg.map(f64::abs)
    }

    pub(crate) fn between(lts: &Pose, gt: &Pose, origin: Timestamp, gt_speed_mm_s: f64) -> Self {
        let (ex_mm, ey_mm) = (lts.x - gt.x, lts.y - gt.y);
        Self {
            t_s: lts.t.secs_since(origin),
            eval_pose_id: None,
            visit_index: None,
            ex_mm,
            ey_mm,
            ez_mm: lts.z.zip(gt.z).map(|(l, g)| l - g),
            horizontal_mm: ex_mm.hypot(ey_mm),
            orientation_deg: lts
                .heading()
                .zip(gt.heading())
                .map(|(l, g)| shortest_arc(g, l)),
            gt_speed_mm_s,
            gt_yaw_deg: gt.heading(),
        }
    }
}

/// Per-visit errors of matched samples. `origin` anchors `t_s`.
pub fn compute_pose_errors(matched: &[MatchedSample], origin: Timestamp) -> Vec<ErrorSample> {
    matched
        .iter()
        .map(|m| ErrorSample {
            eval_pose_id: Some(m.visit.eval_pose_id),
            visit_index: Some(m.visit.visit_index),
            ..ErrorSample::between(&m.lts_pose, &m.gt_pose, origin, m.gt_speed_mm_s)
        })
        .collect()
}

/// Errors of every LTS sample strictly inside the ground-truth time range.
pub fn compute_stream_errors(gt: &Trajectory, lts: &Trajectory) -> Vec<ErrorSample> {
    let Some(origin) = gt.first_time() else {
        return Vec::new();
    };
    lts.samples()
        .iter()
        .filter_map(|p| {
            let g = interpolate_pose(gt, p.t).ok()?;
            let speed = estimate_velocity(gt, p.t, 0).map_or(0.0, |v| v.speed);
            Some(ErrorSample::between(p, &g, origin, speed))
        })
        .collect()
}
