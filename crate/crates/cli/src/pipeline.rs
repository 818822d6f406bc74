//! End-to-end run driven by a YAML manifest.
//!
//! Output layout under `out`:
//! `testcase.yaml`, then per system `<name>/` holding the experiment files,
//! `results.yaml` and `plots/`, and `evaluation/<profile>.yaml` per profile.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use lts_eval::metrics::{evaluate_performance_with, EvalConfig, PerformanceResults};
use lts_eval::requirements::{ApplicationProfile, EvaluationResults};
use lts_eval::scenario::{validate_test_case, TestCase};
use lts_eval::testbed::{run_experiment_at, static_gate_log, ErrorModel, ExperimentData, DEFAULT_GT_RATE_HZ};
use lts_eval::trajectory::Source;

use crate::io::{read_trajectory, read_yaml, resolve, write_experiment, write_yaml};
use crate::report::write_plot_data;
use crate::{evaluate_profile, invalid};

fn default_quantiles() -> Vec<f64> {
    EvalConfig::default().quantiles
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub testcase: PathBuf,
    pub out: PathBuf,
    /// Overrides the error-model seeds; system `i` gets `seed + i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_quantiles")]
    pub quantiles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_speed_threshold_mm_s: Option<f64>,
    /// Replaces every static threshold in the test case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_speed_threshold_mm_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_rate_hz: Option<f64>,
    pub systems: Vec<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profiles: Vec<PathBuf>,
}

/// A simulated system (`error_model`) or recorded data (`gt_csv` + `lts_csv`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_model: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lts_csv: Option<PathBuf>,
}

#[derive(Debug, Default)]
pub struct PipelineSummary {
    pub warnings: Vec<String>,
    pub results: Vec<(String, PerformanceResults)>,
    pub evaluations: Vec<EvaluationResults>,
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name != "evaluation"
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        && !name.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(invalid(format!("system name `{name}` must be a plain file name")))
    }
}

fn load_data(
    manifest_path: &Path,
    m: &RunManifest,
    i: usize,
    sys: &SystemSpec,
    tc: &TestCase,
) -> Result<ExperimentData> {
    match (&sys.error_model, &sys.gt_csv, &sys.lts_csv) {
        (Some(em), None, None) => {
            let mut em: ErrorModel = read_yaml(&resolve(manifest_path, em))?;
            if let Some(s) = m.seed {
                em.seed = s.wrapping_add(i as u64);
            }
            run_experiment_at(tc, &em, m.gt_rate_hz.unwrap_or(DEFAULT_GT_RATE_HZ)).map_err(invalid)
        }
        (None, Some(gt), Some(lts)) => {
            let gt = read_trajectory(&resolve(manifest_path, gt), Source::GroundTruth)?;
            let lts = read_trajectory(&resolve(manifest_path, lts), Source::Lts)?;
            Ok(ExperimentData {
                test_case_id: tc.id.clone(),
                static_gate_log: static_gate_log(tc, &gt),
                gt,
                lts,
                seed: None,
                error_model_sha256: None,
            })
        }
        _ => Err(invalid(format!(
            "system `{}` needs either error_model or both gt_csv and lts_csv",
            sys.name
        ))),
    }
}

pub fn run_pipeline(manifest_path: &Path) -> Result<PipelineSummary> {
    let m: RunManifest = read_yaml(manifest_path)?;
    let mut summary = PipelineSummary::default();
    if m.systems.is_empty() {
        return Err(invalid("manifest lists no systems"));
    }
    for (i, s) in m.systems.iter().enumerate() {
        check_name(&s.name)?;
        if m.systems[..i].iter().any(|o| o.name == s.name) {
            return Err(invalid(format!("duplicate system name `{}`", s.name)));
        }
    }

    let mut tc: TestCase = read_yaml(&resolve(manifest_path, &m.testcase))?;
    if let Some(v) = m.static_speed_threshold_mm_s {
        tc.conditions.static_speed_threshold_mm_s = Some(v);
        for ep in tc.eval_poses.iter_mut().filter(|ep| ep.required_static) {
            ep.static_speed_threshold_mm_s = Some(v);
        }
    }
    let report = validate_test_case(&tc);
    summary.warnings.extend(report.warnings.iter().cloned());
    if !report.is_ok() {
        return Err(invalid(report.errors.join("; ")));
    }

    let profiles = m
        .profiles
        .iter()
        .map(|p| {
            let path = resolve(manifest_path, p);
            let profile: ApplicationProfile = read_yaml(&path)?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("profile").to_owned();
            Ok((stem, profile))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cfg = EvalConfig {
        quantiles: m.quantiles.clone(),
        include_error_samples: true,
        ..Default::default()
    };
    for (_, p) in &profiles {
        cfg.quantiles.extend(p.quantiles());
    }
    cfg.quantiles.sort_by(f64::total_cmp);
    cfg.quantiles.dedup();
    if let Some(v) = m.latency_speed_threshold_mm_s {
        cfg.latency_speed_threshold_mm_s = v;
    }

    let out = resolve(manifest_path, &m.out);
    write_yaml(&out.join("testcase.yaml"), &tc)?;
    for (i, sys) in m.systems.iter().enumerate() {
        let data = load_data(manifest_path, &m, i, sys, &tc)
            .with_context(|| format!("system `{}`", sys.name))?;
        let dir = out.join(&sys.name);
        write_experiment(&dir, &tc, &data, Some(&sys.name))?;
        let cfg = EvalConfig { lts_name: Some(sys.name.clone()), ..cfg.clone() };
        let results = evaluate_performance_with(&data, &tc, &cfg)
            .map_err(crate::metric_error)
            .with_context(|| format!("evaluating `{}`", sys.name))?;
        write_yaml(&dir.join("results.yaml"), &results)?;
        write_plot_data(&results, &dir.join("plots"))?;
        summary.results.push((sys.name.clone(), results));
    }

    for (stem, profile) in &profiles {
        let eval = evaluate_profile(profile, &summary.results)?;
        write_yaml(&out.join("evaluation").join(format!("{stem}.yaml")), &eval)?;
        summary.evaluations.push(eval);
    }
    Ok(summary)
}
