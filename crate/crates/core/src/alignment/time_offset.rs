use serde::{Deserialize, Serialize};

use super::AlignmentError;
use crate::trajectory::{segment_speed, Pose, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OffsetConfig {
    /// Grid step of the offset search, s.
    pub step_s: f64,
    /// Ground-truth speed above which a segment counts as dynamic, mm/s.
    pub speed_threshold_mm_s: f64,
    /// Minimum fraction of the ground-truth duration that must be dynamic.
    pub min_dynamic_fraction: f64,
    /// Minimum max-min spread of the residual curve, mm.
    pub flatness_floor_mm: f64,
}

impl Default for OffsetConfig {
    fn default() -> Self {
        Self {
            step_s: 0.001,
            speed_threshold_mm_s: 100.0,
            min_dynamic_fraction: 0.2,
            flatness_floor_mm: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeOffsetEstimate {
    /// Positive when LTS timestamps lag the ground truth, s.
    pub offset_s: f64,
    /// `(offset_s, mean_horizontal_error_mm)` over the search grid.
    pub residual_curve: Vec<(f64, f64)>,
}

fn dynamic_fraction(gt: &Trajectory, threshold: f64) -> f64 {
    let s = gt.samples();
    let total = gt.duration_s();
    if total <= 0.0 {
        return 0.0;
    }
    let moving: f64 = (0..s.len() - 1)
        .filter(|&i| segment_speed(gt, i) > threshold)
        .map(|i| s[i + 1].t.secs_since(s[i].t))
        .sum();
    moving / total
}

/// Mean horizontal distance between each LTS sample and the linearly
/// interpolated ground truth `shift` ns earlier. Query times are sorted, so a
/// single forward cursor walks the ground truth.
fn mean_distance(gt: &[Pose], lts: &[&Pose], shift: i64) -> f64 {
    let first = lts[0].t + (-shift);
    let mut j = gt.partition_point(|g| g.t <= first).saturating_sub(1);
    let mut total = 0.0;
    for p in lts {
        let t = p.t + (-shift);
        while j + 2 < gt.len() && gt[j + 1].t <= t {
            j += 1;
        }
        let (a, b) = (&gt[j], &gt[j + 1]);
        let f = (t - a.t) as f64 / (b.t - a.t) as f64;
        let dx = a.x + (b.x - a.x) * f - p.x;
        let dy = a.y + (b.y - a.y) * f - p.y;
        total += dx.hypot(dy);
    }
    total / lts.len() as f64
}

/// Clock offset between the LTS and ground-truth streams.
///
/// Minimises the mean horizontal distance between each LTS sample and the
/// ground truth at the LTS timestamp minus the candidate offset, over a grid
/// in `[-search_window_s, search_window_s]`, then refines the grid minimum
/// with a parabola through its two neighbours. Only LTS samples that stay
/// inside the ground-truth range for every candidate are used, so all grid
/// points average the same sample set.
pub fn estimate_time_offset(
    gt: &Trajectory,
    lts: &Trajectory,
    search_window_s: f64,
    cfg: &OffsetConfig,
) -> Result<TimeOffsetEstimate, AlignmentError> {
    if !(search_window_s > 0.0) || !(cfg.step_s > 0.0) {
        return Err(AlignmentError::InvalidParameter(
            "search window and step must be positive".into(),
        ));
    }
    gt.require_len(2)?;
    let fraction = dynamic_fraction(gt, cfg.speed_threshold_mm_s);
    if fraction < cfg.min_dynamic_fraction {
        return Err(AlignmentError::Unobservable(format!(
            "ground truth dynamic for {:.1}% of its duration, need {:.1}%",
            100.0 * fraction,
            100.0 * cfg.min_dynamic_fraction
        )));
    }
    let (first, last) = (gt.first_time().unwrap(), gt.last_time().unwrap());
    let window = crate::trajectory::Timestamp::from_secs_f64(search_window_s).nanos();
    let usable: Vec<_> = lts
        .samples()
        .iter()
        .filter(|p| p.t - first >= window && last - p.t >= window)
        .collect();
    if usable.is_empty() {
        return Err(AlignmentError::InsufficientOverlap);
    }
    let steps = (search_window_s / cfg.step_s).round() as i64;
    let curve: Vec<(f64, f64)> = (-steps..=steps)
        .map(|k| {
            let offset = k as f64 * cfg.step_s;
            let shift = (offset * 1e9).round() as i64;
            (offset, mean_distance(gt.samples(), &usable, shift))
        })
        .collect();

    let (lo, hi) = curve
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, e)| {
            (lo.min(e), hi.max(e))
        });
    if hi - lo < cfg.flatness_floor_mm {
        return Err(AlignmentError::Unobservable(format!(
            "residual curve spread {:.3} mm below floor {} mm",
            hi - lo,
            cfg.flatness_floor_mm
        )));
    }
    let k = curve
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let mut offset_s = curve[k].0;
    if k > 0 && k + 1 < curve.len() {
        let (y0, y1, y2) = (curve[k - 1].1, curve[k].1, curve[k + 1].1);
        let denom = y0 - 2.0 * y1 + y2;
        if denom > 0.0 {
            offset_s += (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5) * cfg.step_s;
        }
    }
    Ok(TimeOffsetEstimate {
        offset_s,
        residual_curve: curve,
    })
}
