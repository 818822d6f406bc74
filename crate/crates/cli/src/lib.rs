//! Library side of the `lts-eval` command-line tool: file formats, plot
//! export, the manifest-driven pipeline and exit-code classification.

pub mod io;
pub mod pipeline;
pub mod report;

use std::fmt;
use std::path::Path;

use anyhow::Result;

use lts_eval::metrics::{MetricError, PerformanceResults};
use lts_eval::requirements::{benefit_analysis, match_requirements, ApplicationProfile, EvaluationResults, RequirementError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// Error-level diagnostic about the content of an input document.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

pub fn invalid(e: impl fmt::Display) -> anyhow::Error {
    Invalid(e.to_string()).into()
}

/// Trajectory errors come from malformed files; the rest are content problems.
pub fn metric_error(e: MetricError) -> anyhow::Error {
    match e {
        MetricError::Trajectory(_) => e.into(),
        other => invalid(other),
    }
}

pub fn requirement_error(e: RequirementError) -> anyhow::Error {
    match e {
        RequirementError::Schema(_) => e.into(),
        other => invalid(other),
    }
}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.chain().any(|c| c.is::<Invalid>()) {
        EXIT_INVALID
    } else {
        EXIT_IO
    }
}

/// Matches one profile and adds the benefit ranking when the profile
/// carries weights.
pub fn evaluate_profile(
    profile: &ApplicationProfile,
    results: &[(String, PerformanceResults)],
) -> Result<EvaluationResults> {
    let mut eval = match_requirements(profile, results).map_err(requirement_error)?;
    eval.benefit_ranking = match benefit_analysis(&eval) {
        Ok(r) => Some(r),
        Err(RequirementError::NotApplicable) => None,
        Err(e) => return Err(requirement_error(e)),
    };
    Ok(eval)
}

/// Name for a results file: the recorded LTS name, else the file stem.
pub fn results_name(path: &Path, r: &PerformanceResults) -> String {
    r.metadata.lts_name.clone().unwrap_or_else(|| {
        path.file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("lts")
            .to_owned()
    })
}

/// Plain-text criteria matrix for the terminal.
pub fn format_matrix(eval: &EvaluationResults) -> String {
    let join = |v: &[String]| if v.is_empty() { "-".to_owned() } else { v.join(", ") };
    let mut s = format!("{}\n", eval.profile);
    for row in &eval.criteria {
        s += &format!(
            "  {:<22} {:<28} {}\n",
            row.metric_id.name(),
            join(&row.requirements),
            join(&row.suitable)
        );
    }
    s += &format!("  {:<22} {:<28} {}\n", "overall", "", join(&eval.overall_suitable));
    if let Some(rank) = &eval.benefit_ranking {
        for r in rank {
            s += &format!("  rank {}: {} (score {})\n", r.rank, r.lts_name, r.score);
        }
    }
    s
}
