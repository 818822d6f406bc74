use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::trajectory::EvaluationPose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    StandardDynamic,
    StandardStatic,
    Repeatability,
    Latency,
    CoordinateAlignment,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        Self::StandardDynamic,
        Self::StandardStatic,
        Self::Repeatability,
        Self::Latency,
        Self::CoordinateAlignment,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::StandardDynamic => "standard_dynamic",
            Self::StandardStatic => "standard_static",
            Self::Repeatability => "repeatability",
            Self::Latency => "latency",
            Self::CoordinateAlignment => "coordinate_alignment",
            Self::Custom => "custom",
        }
    }

    /// Kinds whose evaluation poses must be passed standing still.
    pub fn requires_static(self) -> bool {
        matches!(self, Self::StandardStatic | Self::CoordinateAlignment)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown scenario kind `{s}`"))
    }
}

/// Rectangular test area anchored at the origin, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width_m: f64,
    pub depth_m: f64,
}

impl Area {
    pub fn square_metres(&self) -> f64 {
        self.width_m * self.depth_m
    }

    pub fn contains_mm(&self, x_mm: f64, y_mm: f64, margin_mm: f64) -> bool {
        (margin_mm..=self.width_m * 1000.0 - margin_mm).contains(&x_mm)
            && (margin_mm..=self.depth_m * 1000.0 - margin_mm).contains(&y_mm)
    }
}

/// Trajectory template point. `t` (seconds) is informational; ground-truth
/// generation derives timing from the nominal speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub x_mm: f64,
    pub y_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yaw_deg: Option<f64>,
}

impl Waypoint {
    pub fn xy(x_mm: f64, y_mm: f64) -> Self {
        Self {
            t: None,
            x_mm,
            y_mm,
            z_mm: None,
            yaw_deg: None,
        }
    }
}

pub const DEFAULT_NOMINAL_SPEED_MM_S: f64 = 1400.0;
pub const DEFAULT_DWELL_S: f64 = 2.0;

fn default_speed() -> f64 {
    DEFAULT_NOMINAL_SPEED_MM_S
}

fn default_dwell() -> f64 {
    DEFAULT_DWELL_S
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_speed_threshold_mm_s: Option<f64>,
    pub max_match_gap_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_repeat_visits: Option<u32>,
    #[serde(default = "default_speed")]
    pub nominal_speed_mm_s: f64,
    /// Standing time at static evaluation poses.
    #[serde(default = "default_dwell")]
    pub dwell_s: f64,
    /// Accuracy the LTS under test is expected to reach; checked against
    /// the ground-truth accuracy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_lts_accuracy_mm: Option<f64>,
}

impl Default for Conditions {
    fn default() -> Self {
        Self {
            static_speed_threshold_mm_s: None,
            max_match_gap_s: 0.25,
            min_repeat_visits: None,
            nominal_speed_mm_s: DEFAULT_NOMINAL_SPEED_MM_S,
            dwell_s: DEFAULT_DWELL_S,
            expected_lts_accuracy_mm: None,
        }
    }
}

/// Everything needed to execute and evaluate one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub id: String,
    pub scenario_kind: ScenarioKind,
    pub area: Area,
    pub waypoints: Vec<Waypoint>,
    pub eval_poses: Vec<EvaluationPose>,
    pub conditions: Conditions,
    #[serde(default)]
    pub reporting: BTreeMap<String, String>,
    pub gt_accuracy_mm: f64,
}
