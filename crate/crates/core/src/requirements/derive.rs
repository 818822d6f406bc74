use super::{Direction, MetricId, Obligation, Requirement, RequirementError, Threshold, Unit};

/// Minimum update rate so that neither the distance travelled between
/// updates at full speed exceeds the tolerated position error, nor a static
/// entity goes without an update for longer than the tolerated interval.
pub fn derive_update_rate_requirement(
    max_speed_mm_s: f64,
    max_position_error_mm: f64,
    max_static_interval_s: f64,
) -> Result<Requirement, RequirementError> {
    if !(max_speed_mm_s >= 0.0) || !(max_position_error_mm > 0.0) || !(max_static_interval_s > 0.0)
    {
        return Err(RequirementError::Invalid(
            "speed must be non-negative, error and interval positive".into(),
        ));
    }
    let dynamic = max_speed_mm_s / max_position_error_mm;
    let statik = 1.0 / max_static_interval_s;
    Ok(Requirement {
        metric_id: MetricId::UpdateRate,
        quantile: None,
        threshold: Threshold {
            value: dynamic.max(statik),
            unit: Unit::Hz,
        },
        direction: Direction::Min,
        obligation: Obligation::Must,
        benefit_weight: None,
    })
}

/// Maximum latency such that the entity at full speed moves no further than
/// the tolerated delay distance.
pub fn derive_latency_requirement(
    max_speed_mm_s: f64,
    max_delay_distance_mm: f64,
) -> Result<Requirement, RequirementError> {
    if !(max_speed_mm_s > 0.0) || !(max_delay_distance_mm > 0.0) {
        return Err(RequirementError::Invalid(
            "speed and delay distance must be positive".into(),
        ));
    }
    Ok(Requirement {
        metric_id: MetricId::Latency,
        quantile: None,
        threshold: Threshold {
            value: 1000.0 * max_delay_distance_mm / max_speed_mm_s,
            unit: Unit::Ms,
        },
        direction: Direction::Max,
        obligation: Obligation::Must,
        benefit_weight: None,
    })
}
