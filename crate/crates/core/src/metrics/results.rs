use serde::{Deserialize, Serialize};

use super::quantile::quantile_sorted;
use super::{Drift, ErrorSample, Marker, Repeatability, Reported, UpdateRate};
use crate::alignment::AlignmentReport;
use crate::scenario::ScenarioKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileValue {
    pub q: f64,
    pub value: Reported<f64>,
}

/// Summary of one error distribution. `std` uses the `n - 1` denominator
/// and is 0 for a single sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quantiles: Vec<QuantileValue>,
}

impl Distribution {
    /// `None` for an empty sample set.
    pub fn from_samples(values: &[f64], quantiles: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let quantiles = quantiles
            .iter()
            .map(|&q| QuantileValue {
                q,
                value: quantile_sorted(&sorted, q),
            })
            .collect();
        Some(Self {
            mean,
            std,
            count: n,
            quantiles,
        })
    }

    pub fn quantile(&self, q: f64) -> Option<&Reported<f64>> {
        self.quantiles
            .iter()
            .find(|v| (v.q - q).abs() < 1e-12)
            .map(|v| &v.value)
    }
}

pub(crate) fn distribution(
    values: Option<Vec<f64>>,
    quantiles: &[f64],
) -> Reported<Distribution> {
    match values {
        None => Marker::NotProvided.into(),
        Some(v) => Distribution::from_samples(&v, quantiles)
            .map_or(Marker::InsufficientSamples.into(), Reported::Value),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockOffset {
    /// Positive when LTS stamps lag the ground truth, ms.
    pub offset_ms: f64,
    pub method: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultsMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lts_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario_kind: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_model_sha256: Option<String>,
}

/// All performance metrics of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceResults {
    pub test_case_id: String,
    #[serde(default)]
    pub metadata: ResultsMetadata,
    /// Matched evaluation-pose visits.
    pub sample_count: usize,
    pub missed_visit_count: usize,
    pub absolute_horizontal_error_mm: Reported<Distribution>,
    pub absolute_vertical_error_mm: Reported<Distribution>,
    pub absolute_orientation_error_deg: Reported<Distribution>,
    pub position_error_x_mm: Reported<Distribution>,
    pub position_error_y_mm: Reported<Distribution>,
    pub position_error_z_mm: Reported<Distribution>,
    /// Signed yaw error.
    pub orientation_error_deg: Reported<Distribution>,
    /// Mean along-track lag over the full streams.
    pub latency_ms: Reported<f64>,
    pub update_rate_hz: Reported<UpdateRate>,
    pub repeatability_mm: Repeatability,
    pub drift: Reported<Drift>,
    pub clock_offset_ms: Reported<ClockOffset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<AlignmentReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub error_samples: Vec<ErrorSample>,
}
