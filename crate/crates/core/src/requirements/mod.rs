//! Application requirements, their derivation from process parameters,
//! matching against performance results, and benefit ranking.

mod benefit;
mod derive;
mod matching;
mod model;

use thiserror::Error;

pub use benefit::{benefit_analysis, RankedLts};
pub use derive::{derive_latency_requirement, derive_update_rate_requirement};
pub use matching::{
    match_requirements, CriterionRow, EvaluationResults, LtsEvaluation, RequirementOutcome,
    RequirementStatus, OBLIGATION_SEMANTICS,
};
pub use model::{ApplicationProfile, Direction, MetricId, Obligation, Requirement, Threshold, Unit};

#[derive(Debug, Error)]
pub enum RequirementError {
    #[error("invalid requirement: {0}")]
    Invalid(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("benefit analysis not applicable: no requirement carries a benefit weight")]
    NotApplicable,
}
