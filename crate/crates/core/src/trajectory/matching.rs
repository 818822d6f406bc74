use serde::{Deserialize, Serialize};

use super::{interpolate_pose, Pose, Trajectory, TrajectoryError, Visit};

/// An LTS sample associated with a ground-truth visit.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedSample {
    pub visit: Visit,
    pub lts_pose: Pose,
    /// Ground truth interpolated at the LTS sample's timestamp; this is the
    /// reference the sample's errors are measured against.
    pub gt_pose: Pose,
    /// Ground-truth speed at the LTS timestamp, mm/s.
    pub gt_speed_mm_s: f64,
    pub time_gap_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissedVisit {
    pub eval_pose_id: u32,
    pub visit_index: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchOutcome {
    pub matched: Vec<MatchedSample>,
    pub missed: Vec<MissedVisit>,
}

/// Index of the LTS sample nearest in time to `t`; equidistant samples
/// resolve to the earlier one.
fn nearest(lts: &Trajectory, t: super::Timestamp) -> Option<usize> {
    let s = lts.samples();
    if s.is_empty() {
        return None;
    }
    let upper = s.partition_point(|p| p.t < t);
    match (upper.checked_sub(1), (upper < s.len()).then_some(upper)) {
        (Some(lo), Some(hi)) => Some(if t - s[lo].t <= s[hi].t - t { lo } else { hi }),
        (Some(lo), None) => Some(lo),
        (None, Some(hi)) => Some(hi),
        (None, None) => None,
    }
}

/// Associates each visit with the LTS sample nearest in time.
///
/// Visits whose nearest sample is further than `max_match_gap_s` away, or
/// whose sample falls outside the ground-truth time range, are reported as
/// missed. One LTS sample may serve several visits.
pub fn match_lts(
    gt: &Trajectory,
    lts: &Trajectory,
    visits: &[Visit],
    max_match_gap_s: f64,
) -> Result<MatchOutcome, TrajectoryError> {
    if !(max_match_gap_s > 0.0) {
        return Err(TrajectoryError::InvalidMatchGap(max_match_gap_s));
    }
    let mut out = MatchOutcome::default();
    for visit in visits {
        let missed = MissedVisit {
            eval_pose_id: visit.eval_pose_id,
            visit_index: visit.visit_index,
        };
        let Some(i) = nearest(lts, visit.gt_time) else {
            out.missed.push(missed);
            continue;
        };
        let lts_pose = lts.samples()[i];
        let gap = (lts_pose.t - visit.gt_time).unsigned_abs() as f64 * 1e-9;
        let gt_pose = interpolate_pose(gt, lts_pose.t);
        match gt_pose {
            Ok(gt_pose) if gap <= max_match_gap_s => {
                let gt_speed_mm_s = gt
                    .segment_index(lts_pose.t)
                    .map(|seg| super::segment_speed(gt, seg))
                    .unwrap_or(0.0);
                out.matched.push(MatchedSample {
                    visit: visit.clone(),
                    lts_pose,
                    gt_pose,
                    gt_speed_mm_s,
                    time_gap_s: gap,
                });
            }
            _ => out.missed.push(missed),
        }
    }
    Ok(out)
}
