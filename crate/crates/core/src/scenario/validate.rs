use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::testcase::{ScenarioKind, TestCase};

pub const MIN_RECOMMENDED_POSES: usize = 50;
pub const MAX_RECOMMENDED_POSES: usize = 100;
/// Required ratio between expected LTS accuracy and ground-truth accuracy.
pub const GT_ACCURACY_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    /// True when the test case can be executed.
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

fn finite(v: f64) -> bool {
    v.is_finite()
}

pub fn validate_test_case(tc: &TestCase) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let c = &tc.conditions;

    if tc.id.trim().is_empty() {
        errors.push("test case id is empty".to_string());
    }
    let area_ok = tc.area.width_m > 0.0
        && tc.area.depth_m > 0.0
        && finite(tc.area.width_m)
        && finite(tc.area.depth_m);
    if !area_ok {
        errors.push(format!(
            "area must be positive, got {} x {} m",
            tc.area.width_m, tc.area.depth_m
        ));
    }
    if !(tc.gt_accuracy_mm > 0.0 && finite(tc.gt_accuracy_mm)) {
        errors.push(format!("gt_accuracy_mm must be positive, got {}", tc.gt_accuracy_mm));
    }
    if !(c.max_match_gap_s > 0.0 && finite(c.max_match_gap_s)) {
        errors.push(format!("max_match_gap_s must be positive, got {}", c.max_match_gap_s));
    }
    if !(c.nominal_speed_mm_s > 0.0 && finite(c.nominal_speed_mm_s)) {
        errors.push(format!(
            "nominal_speed_mm_s must be positive, got {}",
            c.nominal_speed_mm_s
        ));
    }
    if !(c.dwell_s >= 0.0 && finite(c.dwell_s)) {
        errors.push(format!("dwell_s must be non-negative, got {}", c.dwell_s));
    }
    if let Some(th) = c.static_speed_threshold_mm_s {
        if !(th > 0.0 && finite(th)) {
            errors.push(format!("static_speed_threshold_mm_s must be positive, got {th}"));
        }
    }

    if tc.waypoints.len() < 2 {
        errors.push(format!("need at least 2 waypoints, got {}", tc.waypoints.len()));
    }
    for (i, w) in tc.waypoints.iter().enumerate() {
        let coords_finite = finite(w.x_mm)
            && finite(w.y_mm)
            && w.z_mm.is_none_or(finite)
            && w.yaw_deg.is_none_or(finite);
        if !coords_finite {
            errors.push(format!("waypoint {i} has non-finite coordinates"));
        } else if area_ok && !tc.area.contains_mm(w.x_mm, w.y_mm, 0.0) {
            errors.push(format!(
                "waypoint {i} at ({:.1}, {:.1}) mm lies outside the area",
                w.x_mm, w.y_mm
            ));
        }
    }
    let with_z = tc.waypoints.iter().filter(|w| w.z_mm.is_some()).count();
    if with_z != 0 && with_z != tc.waypoints.len() {
        errors.push("waypoints mix entries with and without z_mm".to_string());
    }

    if tc.eval_poses.is_empty() {
        errors.push("no evaluation poses".to_string());
    }
    let mut ids = BTreeSet::new();
    for ep in &tc.eval_poses {
        if !ids.insert(ep.id) {
            errors.push(format!("duplicate evaluation pose id {}", ep.id));
        }
        if !(finite(ep.x_mm) && finite(ep.y_mm) && ep.z_mm.is_none_or(finite)) {
            errors.push(format!("evaluation pose {} has non-finite coordinates", ep.id));
        } else if area_ok && !tc.area.contains_mm(ep.x_mm, ep.y_mm, 0.0) {
            errors.push(format!(
                "evaluation pose {} at ({:.1}, {:.1}) mm lies outside the area",
                ep.id, ep.x_mm, ep.y_mm
            ));
        }
        if !(ep.position_tolerance_mm > 0.0 && finite(ep.position_tolerance_mm)) {
            errors.push(format!("evaluation pose {} needs a positive position tolerance", ep.id));
        }
        if let Some(h) = ep.heading_tolerance_deg {
            if !(h > 0.0 && h <= 180.0) {
                errors.push(format!(
                    "evaluation pose {} heading tolerance must lie in (0, 180], got {h}",
                    ep.id
                ));
            }
            if ep.yaw_deg.is_none() {
                errors.push(format!(
                    "evaluation pose {} has a heading tolerance but no yaw_deg",
                    ep.id
                ));
            }
        }
        if ep.required_static
            && ep
                .static_speed_threshold_mm_s
                .or(c.static_speed_threshold_mm_s)
                .is_none()
        {
            errors.push(format!(
                "evaluation pose {} requires a static visit but no speed threshold is set",
                ep.id
            ));
        }
    }

    match tc.scenario_kind {
        kind @ (ScenarioKind::StandardStatic | ScenarioKind::CoordinateAlignment) => {
            if c.static_speed_threshold_mm_s.is_none() {
                errors.push(format!("{kind} requires conditions.static_speed_threshold_mm_s"));
            }
            if tc.eval_poses.iter().any(|p| !p.required_static) {
                errors.push(format!("{kind} requires required_static on every evaluation pose"));
            }
        }
        ScenarioKind::Repeatability => match c.min_repeat_visits {
            None => errors.push("repeatability requires conditions.min_repeat_visits".to_string()),
            Some(k) if k < 2 => {
                errors.push(format!("min_repeat_visits must be at least 2, got {k}"))
            }
            Some(_) => {}
        },
        _ => {}
    }

    let n = tc.eval_poses.len();
    if n < MIN_RECOMMENDED_POSES {
        warnings.push(format!(
            "evaluation pose count below recommended {MIN_RECOMMENDED_POSES} (got {n})"
        ));
    } else if n > MAX_RECOMMENDED_POSES {
        warnings.push(format!(
            "evaluation pose count above recommended {MAX_RECOMMENDED_POSES} (got {n})"
        ));
    }
    if let Some(expected) = c.expected_lts_accuracy_mm {
        if tc.gt_accuracy_mm > 0.0 {
            let ratio = expected / tc.gt_accuracy_mm;
            if ratio < GT_ACCURACY_RATIO {
                warnings.push(format!(
                    "ground truth not an order of magnitude more accurate than the LTS \
                     (ratio {ratio} < {GT_ACCURACY_RATIO})"
                ));
            }
        }
    }

    ValidationReport { errors, warnings }
}
