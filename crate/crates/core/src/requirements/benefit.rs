use serde::{Deserialize, Serialize};

use super::{EvaluationResults, RequirementError, RequirementStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLts {
    pub rank: usize,
    pub lts_name: String,
    pub score: f64,
}

/// Ranks the suitable LTSs by the summed weight of the weighted
/// requirements they pass. Equal scores are ordered by name.
pub fn benefit_analysis(eval: &EvaluationResults) -> Result<Vec<RankedLts>, RequirementError> {
    let weighted = eval
        .lts
        .iter()
        .flat_map(|e| &e.outcomes)
        .any(|o| o.benefit_weight.is_some());
    if !weighted {
        return Err(RequirementError::NotApplicable);
    }
    let mut ranked: Vec<RankedLts> = eval
        .lts
        .iter()
        .filter(|e| e.suitable)
        .map(|e| RankedLts {
            rank: 0,
            lts_name: e.lts_name.clone(),
            score: e
                .outcomes
                .iter()
                .filter(|o| o.status == RequirementStatus::Pass)
                .filter_map(|o| o.benefit_weight)
                .sum(),
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.lts_name.cmp(&b.lts_name))
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}
