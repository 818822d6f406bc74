use serde::{Deserialize, Serialize};

use super::results::distribution;
use super::{
    compute_drift, compute_pose_errors, compute_repeatability, compute_stream_errors,
    compute_update_rate, estimate_latency, quantile::validate_quantiles, ClockOffset, Marker,
    MetricError, PerformanceResults, Reported, ResultsMetadata,
};
use crate::alignment::{align_rigid, estimate_time_offset, AlignMode, OffsetConfig};
use crate::scenario::{ScenarioKind, TestCase};
use crate::testbed::ExperimentData;
use crate::trajectory::{find_visits, match_lts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub quantiles: Vec<f64>,
    pub latency_speed_threshold_mm_s: f64,
    pub offset_search_window_s: f64,
    pub offset: OffsetConfig,
    /// Keep per-visit error samples in the results for plotting.
    pub include_error_samples: bool,
    pub lts_name: Option<String>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            quantiles: vec![0.5, 0.95, 0.999],
            latency_speed_threshold_mm_s: 100.0,
            offset_search_window_s: 0.5,
            offset: OffsetConfig::default(),
            include_error_samples: false,
            lts_name: None,
        }
    }
}

pub fn evaluate_performance(
    data: &ExperimentData,
    tc: &TestCase,
    quantiles: &[f64],
) -> Result<PerformanceResults, MetricError> {
    let cfg = EvalConfig {
        quantiles: quantiles.to_vec(),
        ..Default::default()
    };
    evaluate_performance_with(data, tc, &cfg)
}

/// Full metric suite for one experiment.
///
/// Accuracy and repeatability come from the evaluation-pose matches; latency,
/// update rate, drift and clock offset use the full streams.
pub fn evaluate_performance_with(
    data: &ExperimentData,
    tc: &TestCase,
    cfg: &EvalConfig,
) -> Result<PerformanceResults, MetricError> {
    validate_quantiles(&cfg.quantiles)?;
    if data.test_case_id != tc.id {
        return Err(MetricError::Mismatch(format!(
            "experiment belongs to `{}`, test case is `{}`",
            data.test_case_id, tc.id
        )));
    }
    let (gt, lts) = (&data.gt, &data.lts);
    let origin = gt
        .first_time()
        .ok_or_else(|| MetricError::InsufficientData("empty ground truth".into()))?;

    let visits = find_visits(gt, &tc.eval_poses);
    if visits.is_empty() {
        return Err(MetricError::NoVisits {
            first_unreached: tc.eval_poses.first().map(|e| e.id),
        });
    }
    let outcome = match_lts(gt, lts, &visits, tc.conditions.max_match_gap_s)?;
    let errors = compute_pose_errors(&outcome.matched, origin);

    let q = &cfg.quantiles;
    let has_vertical = lts.capabilities().has_vertical && gt.capabilities().has_vertical;
    let has_heading = lts.capabilities().has_heading && gt.capabilities().has_heading;
    let collect = |f: &dyn Fn(&super::ErrorSample) -> Option<f64>| -> Vec<f64> {
        errors.iter().filter_map(f).collect()
    };
    let horizontal = collect(&|e| Some(e.horizontal_mm));
    let vertical = has_vertical.then(|| collect(&|e| e.vertical_mm()));
    let orientation_abs = has_heading.then(|| collect(&|e| e.abs_orientation_deg()));

    let latency_ms = match estimate_latency(gt, lts, cfg.latency_speed_threshold_mm_s) {
        Ok(v) => Reported::Value(v),
        Err(MetricError::InsufficientDynamicSamples) => Marker::InsufficientDynamicSamples.into(),
        Err(e) => return Err(e),
    };
    let update_rate_hz = compute_update_rate(lts)
        .map_or(Marker::InsufficientSamples.into(), Reported::Value);
    let stream = compute_stream_errors(gt, lts);
    let drift = compute_drift(&stream).map_or(Marker::InsufficientSamples.into(), Reported::Value);
    let clock_offset_ms =
        match estimate_time_offset(gt, lts, cfg.offset_search_window_s, &cfg.offset) {
            Ok(est) => Reported::Value(ClockOffset {
                offset_ms: est.offset_s * 1000.0,
                method: "grid search of mean horizontal residual with parabolic refinement"
                    .into(),
            }),
            Err(crate::alignment::AlignmentError::Unobservable(_)) => Marker::Unobservable.into(),
            Err(_) => Marker::NotComputable.into(),
        };

    let alignment = (tc.scenario_kind == ScenarioKind::CoordinateAlignment)
        .then(|| {
            let mode = if has_vertical {
                AlignMode::Spatial3D
            } else {
                AlignMode::Planar2D
            };
            let pairs: Vec<_> = outcome
                .matched
                .iter()
                .map(|m| (m.lts_pose.position(), m.gt_pose.position()))
                .collect();
            align_rigid(&pairs, mode).ok()
        })
        .flatten();

    Ok(PerformanceResults {
        test_case_id: tc.id.clone(),
        metadata: ResultsMetadata {
            lts_name: cfg.lts_name.clone(),
            scenario_kind: Some(tc.scenario_kind),
            seed: data.seed,
            error_model_sha256: data.error_model_sha256.clone(),
        },
        sample_count: outcome.matched.len(),
        missed_visit_count: outcome.missed.len(),
        absolute_horizontal_error_mm: distribution(Some(horizontal), q),
        absolute_vertical_error_mm: distribution(vertical, q),
        absolute_orientation_error_deg: distribution(orientation_abs, q),
        position_error_x_mm: distribution(Some(collect(&|e| Some(e.ex_mm))), &[]),
        position_error_y_mm: distribution(Some(collect(&|e| Some(e.ey_mm))), &[]),
        position_error_z_mm: distribution(has_vertical.then(|| collect(&|e| e.ez_mm)), &[]),
        orientation_error_deg: distribution(
            has_heading.then(|| collect(&|e| e.orientation_deg)),
            &[],
        ),
        latency_ms,
        update_rate_hz,
        repeatability_mm: compute_repeatability(&errors),
        drift,
        clock_offset_ms,
        alignment,
        error_samples: if cfg.include_error_samples {
            errors
        } else {
            Vec::new()
        },
    })
}
