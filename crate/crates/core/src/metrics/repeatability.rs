use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ErrorSample, Marker, Reported};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseSpread {
    pub eval_pose_id: u32,
    pub visits: usize,
    /// RMS distance of the visit errors from their centroid, mm.
    pub spread_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repeatability {
    /// Pooled spread over all poses with at least two visits,
    /// `sqrt(sum d² / sum (k - 1))`, mm.
    pub aggregate_mm: Reported<f64>,
    pub per_pose: Vec<PoseSpread>,
    /// Poses with fewer than two matched visits.
    pub excluded_poses: Vec<u32>,
}

/// Closeness of repeated visits to each evaluation pose.
///
/// Works on the error vectors (LTS minus ground truth) of each visit, so
/// ground-truth differences between visits inside the tolerance region do
/// not count as LTS spread. Vertical components are used only when every
/// visit of a pose has one.
pub fn compute_repeatability(samples: &[ErrorSample]) -> Repeatability {
    let mut groups: BTreeMap<u32, Vec<&ErrorSample>> = BTreeMap::new();
    for s in samples {
        if let Some(id) = s.eval_pose_id {
            groups.entry(id).or_default().push(s);
        }
    }
    let mut per_pose = Vec::new();
    let mut excluded_poses = Vec::new();
    let (mut sum_sq, mut dof) = (0.0, 0usize);
    for (id, visits) in groups {
        let k = visits.len();
        if k < 2 {
            excluded_poses.push(id);
            continue;
        }
        let vertical = visits.iter().all(|s| s.ez_mm.is_some());
        let vec = |s: &ErrorSample| [s.ex_mm, s.ey_mm, if vertical { s.ez_mm.unwrap() } else { 0.0 }];
        let mut c = [0.0; 3];
        for v in visits.iter().map(|s| vec(s)) {
            (0..3).for_each(|i| c[i] += v[i] / k as f64);
        }
        let sq: f64 = visits
            .iter()
            .map(|s| {
                let v = vec(s);
                (0..3).map(|i| (v[i] - c[i]).powi(2)).sum::<f64>()
            })
            .sum();
        sum_sq += sq;
        dof += k - 1;
        per_pose.push(PoseSpread {
            eval_pose_id: id,
            visits: k,
            spread_mm: (sq / k as f64).sqrt(),
        });
    }
    let aggregate_mm = if dof == 0 {
        Marker::NotComputable.into()
    } else {
        Reported::Value((sum_sq / dof as f64).sqrt())
    };
    Repeatability {
        aggregate_mm,
        per_pose,
        excluded_poses,
    }
}
