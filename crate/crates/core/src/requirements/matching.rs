use serde::{Deserialize, Serialize};

use super::{ApplicationProfile, Direction, MetricId, Obligation, RequirementError};
use crate::metrics::{Distribution, Marker, PerformanceResults, Reported};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequirementStatus {
    Pass,
    Fail,
    NotProvided,
    InsufficientSamples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementOutcome {
    pub metric_id: MetricId,
    pub requirement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantile: Option<f64>,
    /// Threshold in the metric's native unit.
    pub threshold: f64,
    pub direction: Direction,
    pub obligation: Obligation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    pub status: RequirementStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benefit_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtsEvaluation {
    pub lts_name: String,
    /// True when every `must` requirement passes.
    pub suitable: bool,
    pub outcomes: Vec<RequirementOutcome>,
}

/// One evaluation criterion: the LTSs that pass every requirement on the
/// metric. A metric without requirements is passed by every LTS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub metric_id: MetricId,
    pub requirements: Vec<String>,
    pub suitable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResults {
    pub profile: String,
    pub obligation_semantics: String,
    pub criteria: Vec<CriterionRow>,
    pub overall_suitable: Vec<String>,
    pub lts: Vec<LtsEvaluation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benefit_ranking: Option<Vec<super::RankedLts>>,
}

pub const OBLIGATION_SEMANTICS: &str =
    "must requirements gate overall suitability; shall requirements only contribute benefit weight";

fn distribution_at(
    d: &Reported<Distribution>,
    q: f64,
    metric: MetricId,
    lts: &str,
) -> Result<Result<f64, Marker>, RequirementError> {
    let dist = match d {
        Reported::Value(dist) => dist,
        Reported::Missing(m) => return Ok(Err(*m)),
    };
    match dist.quantile(q) {
        Some(Reported::Value(v)) => Ok(Ok(*v)),
        Some(Reported::Missing(m)) => Ok(Err(*m)),
        None => Err(RequirementError::Schema(format!(
            "results for `{lts}` do not contain {metric} quantile {q}"
        ))),
    }
}

fn lookup(
    r: &PerformanceResults,
    metric: MetricId,
    quantile: Option<f64>,
    lts: &str,
) -> Result<Result<f64, Marker>, RequirementError> {
    let q = || quantile.expect("validated: distributional metrics carry a quantile");
    match metric {
        MetricId::HorizontalAccuracy => {
            distribution_at(&r.absolute_horizontal_error_mm, q(), metric, lts)
        }
        MetricId::VerticalAccuracy => distribution_at(&r.absolute_vertical_error_mm, q(), metric, lts),
        MetricId::OrientationAccuracy => {
            distribution_at(&r.absolute_orientation_error_deg, q(), metric, lts)
        }
        MetricId::Latency => Ok(match &r.latency_ms {
            Reported::Value(v) => Ok(*v),
            Reported::Missing(m) => Err(*m),
        }),
        MetricId::UpdateRate => Ok(match &r.update_rate_hz {
            Reported::Value(u) => Ok(u.rate_hz),
            Reported::Missing(m) => Err(*m),
        }),
    }
}

fn status_for(marker: Marker) -> RequirementStatus {
    match marker {
        Marker::NotProvided => RequirementStatus::NotProvided,
        Marker::InsufficientSamples
        | Marker::InsufficientDynamicSamples
        | Marker::NotComputable
        | Marker::Unobservable => RequirementStatus::InsufficientSamples,
    }
}

/// Compares every requirement of `profile` with each LTS's results.
pub fn match_requirements(
    profile: &ApplicationProfile,
    results: &[(String, PerformanceResults)],
) -> Result<EvaluationResults, RequirementError> {
    profile.validate()?;
    let mut lts = Vec::with_capacity(results.len());
    for (name, r) in results {
        let mut outcomes = Vec::with_capacity(profile.requirements.len());
        for req in &profile.requirements {
            let threshold = req.threshold.in_native(req.metric_id)?;
            let (measured, status) = match lookup(r, req.metric_id, req.quantile, name)? {
                Ok(v) if req.direction.holds(v, threshold) => (Some(v), RequirementStatus::Pass),
                Ok(v) => (Some(v), RequirementStatus::Fail),
                Err(m) => (None, status_for(m)),
            };
            outcomes.push(RequirementOutcome {
                metric_id: req.metric_id,
                requirement: req.describe(),
                quantile: req.quantile,
                threshold,
                direction: req.direction,
                obligation: req.obligation,
                measured,
                status,
                benefit_weight: req.benefit_weight,
            });
        }
        let suitable = outcomes
            .iter()
            .filter(|o| o.obligation == Obligation::Must)
            .all(|o| o.status == RequirementStatus::Pass);
        lts.push(LtsEvaluation {
            lts_name: name.clone(),
            suitable,
            outcomes,
        });
    }

    let criteria = MetricId::ALL
        .iter()
        .map(|&m| CriterionRow {
            metric_id: m,
            requirements: profile
                .requirements
                .iter()
                .filter(|r| r.metric_id == m)
                .map(|r| r.describe())
                .collect(),
            suitable: lts
                .iter()
                .filter(|e| {
                    e.outcomes
                        .iter()
                        .filter(|o| o.metric_id == m)
                        .all(|o| o.status == RequirementStatus::Pass)
                })
                .map(|e| e.lts_name.clone())
                .collect(),
        })
        .collect();
    let overall_suitable = lts
        .iter()
        .filter(|e| e.suitable)
        .map(|e| e.lts_name.clone())
        .collect();
    Ok(EvaluationResults {
        profile: profile.name.clone(),
        obligation_semantics: OBLIGATION_SEMANTICS.into(),
        criteria,
        overall_suitable,
        lts,
        benefit_ranking: None,
    })
}
