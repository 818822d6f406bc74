use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::TestbedError;
use crate::alignment::RigidTransform;

/// Parameterised error model of a simulated LTS.
///
/// Errors are applied in a fixed order: latency delays the content, the
/// frame error maps the delayed ground-truth pose, bias and drift are added,
/// Gaussian noise is added, and finally the sample is stamped with the
/// clock offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    /// Per-axis standard deviation (x, y, z), mm.
    #[serde(default)]
    pub noise_sigma_mm: [f64; 3],
    #[serde(default)]
    pub bias_mm: [f64; 3],
    /// Per-axis error growth since the start of the stream, mm/s.
    #[serde(default)]
    pub drift_mm_per_s: [f64; 3],
    /// Miscalibration mapping ground-truth coordinates into LTS coordinates.
    #[serde(default)]
    pub frame_error: RigidTransform,
    #[serde(default)]
    pub latency_s: f64,
    pub update_rate_hz: f64,
    #[serde(default)]
    pub dropout_prob: f64,
    #[serde(default)]
    pub heading_noise_sigma_deg: f64,
    #[serde(default)]
    pub provides_vertical: bool,
    #[serde(default = "yes")]
    pub provides_heading: bool,
    #[serde(default)]
    pub clock_offset_s: f64,
    #[serde(default)]
    pub seed: u64,
}

fn yes() -> bool {
    true
}

impl ErrorModel {
    /// Error-free LTS at the given rate.
    pub fn ideal(update_rate_hz: f64) -> Self {
        Self {
            noise_sigma_mm: [0.0; 3],
            bias_mm: [0.0; 3],
            drift_mm_per_s: [0.0; 3],
            frame_error: RigidTransform::identity(),
            latency_s: 0.0,
            update_rate_hz,
            dropout_prob: 0.0,
            heading_noise_sigma_deg: 0.0,
            provides_vertical: false,
            provides_heading: true,
            clock_offset_s: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), TestbedError> {
        let bad = |msg: String| Err(TestbedError::InvalidErrorModel(msg));
        let all_finite = self
            .noise_sigma_mm
            .iter()
            .chain(&self.bias_mm)
            .chain(&self.drift_mm_per_s)
            .chain([
                &self.latency_s,
                &self.update_rate_hz,
                &self.dropout_prob,
                &self.heading_noise_sigma_deg,
                &self.clock_offset_s,
            ])
            .all(|v| v.is_finite());
        if !all_finite {
            return bad("non-finite parameter".into());
        }
        if self.noise_sigma_mm.iter().any(|s| *s < 0.0) || self.heading_noise_sigma_deg < 0.0 {
            return bad("noise standard deviations must be non-negative".into());
        }
        if self.update_rate_hz <= 0.0 {
            return bad(format!("update_rate_hz must be positive, got {}", self.update_rate_hz));
        }
        if !(0.0..=1.0).contains(&self.dropout_prob) {
            return bad(format!("dropout_prob must lie in [0, 1], got {}", self.dropout_prob));
        }
        if self.latency_s < 0.0 {
            return bad(format!("latency_s must be non-negative, got {}", self.latency_s));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical YAML serialisation.
    pub fn sha256(&self) -> String {
        let yaml = serde_yaml::to_string(self).expect("error model serialises");
        Sha256::digest(yaml.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
