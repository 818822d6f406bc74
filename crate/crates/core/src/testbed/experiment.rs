use serde::{Deserialize, Serialize};

use super::{generate_gt, simulate_lts, ErrorModel, TestbedError};
use crate::scenario::{validate_test_case, TestCase};
use crate::trajectory::{tolerance_intervals, Trajectory};

pub const DEFAULT_GT_RATE_HZ: f64 = 100.0;

/// Outcome of the standstill check at one static evaluation pose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticGateEntry {
    pub eval_pose_id: u32,
    pub accepted: bool,
    /// Lowest ground-truth speed inside the tolerance region; absent when
    /// the pose is never reached.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_speed_mm_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentData {
    pub test_case_id: String,
    pub gt: Trajectory,
    pub lts: Trajectory,
    pub static_gate_log: Vec<StaticGateEntry>,
    pub seed: Option<u64>,
    pub error_model_sha256: Option<String>,
}

/// YAML manifest tying an experiment's trajectory files together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub test_case_id: String,
    pub testcase: String,
    pub gt_csv: String,
    pub lts_csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lts_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_model_sha256: Option<String>,
    #[serde(default)]
    pub static_gate_log: Vec<StaticGateEntry>,
}

/// Checks each static evaluation pose against its speed threshold.
pub fn static_gate_log(tc: &TestCase, gt: &Trajectory) -> Vec<StaticGateEntry> {
    tc.eval_poses
        .iter()
        .filter(|ep| ep.required_static)
        .map(|ep| {
            let threshold = ep
                .static_speed_threshold_mm_s
                .or(tc.conditions.static_speed_threshold_mm_s)
                .unwrap_or(0.0);
            let unrestricted = crate::trajectory::EvaluationPose {
                required_static: false,
                ..ep.clone()
            };
            let gt_speed_mm_s = tolerance_intervals(gt, &unrestricted)
                .iter()
                .map(|iv| iv.min_speed_mm_s)
                .min_by(f64::total_cmp);
            StaticGateEntry {
                eval_pose_id: ep.id,
                accepted: gt_speed_mm_s.is_some_and(|v| v <= threshold),
                gt_speed_mm_s,
            }
        })
        .collect()
}

/// Generates ground truth, simulates the LTS and logs the static gates.
pub fn run_experiment(tc: &TestCase, em: &ErrorModel) -> Result<ExperimentData, TestbedError> {
    run_experiment_at(tc, em, DEFAULT_GT_RATE_HZ)
}

pub fn run_experiment_at(
    tc: &TestCase,
    em: &ErrorModel,
    gt_rate_hz: f64,
) -> Result<ExperimentData, TestbedError> {
    let report = validate_test_case(tc);
    if !report.is_ok() {
        return Err(TestbedError::InvalidTestCase(report.errors));
    }
    let gt = generate_gt(tc, gt_rate_hz)?;
    let lts = simulate_lts(&gt, em)?;
    let static_gate_log = static_gate_log(tc, &gt);
    Ok(ExperimentData {
        test_case_id: tc.id.clone(),
        gt,
        lts,
        static_gate_log,
        seed: Some(em.seed),
        error_model_sha256: Some(em.sha256()),
    })
}
