#![allow(dead_code)]

use lts_eval::metrics::{
    Distribution, Marker, PerformanceResults, QuantileValue, Repeatability, Reported,
    ResultsMetadata, UpdateRate,
};

pub fn dist(count: usize, quantiles: &[(f64, Option<f64>)]) -> Reported<Distribution> {
    Reported::Value(Distribution {
        mean: 0.0,
        std: 0.0,
        count,
        quantiles: quantiles
            .iter()
            .map(|&(q, v)| QuantileValue {
                q,
                value: v.map_or(Marker::InsufficientSamples.into(), Reported::Value),
            })
            .collect(),
    })
}

/// Results record carrying only what requirement matching reads.
pub fn results(
    horizontal: Reported<Distribution>,
    orientation: Reported<Distribution>,
    latency_ms: f64,
    rate_hz: f64,
) -> PerformanceResults {
    PerformanceResults {
        test_case_id: "fixture".into(),
        metadata: ResultsMetadata::default(),
        sample_count: 0,
        missed_visit_count: 0,
        absolute_horizontal_error_mm: horizontal,
        absolute_vertical_error_mm: Marker::NotProvided.into(),
        absolute_orientation_error_deg: orientation,
        position_error_x_mm: Marker::NotProvided.into(),
        position_error_y_mm: Marker::NotProvided.into(),
        position_error_z_mm: Marker::NotProvided.into(),
        orientation_error_deg: Marker::NotProvided.into(),
        latency_ms: Reported::Value(latency_ms),
        update_rate_hz: Reported::Value(UpdateRate {
            rate_hz,
            max_gap_s: 1.0 / rate_hz,
            sample_count: 100,
        }),
        repeatability_mm: Repeatability {
            aggregate_mm: Marker::NotComputable.into(),
            per_pose: vec![],
            excluded_poses: vec![],
        },
        drift: Marker::InsufficientSamples.into(),
        clock_offset_ms: Marker::NotComputable.into(),
        alignment: None,
        error_samples: vec![],
    }
}
