use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::RequirementError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    HorizontalAccuracy,
    VerticalAccuracy,
    OrientationAccuracy,
    Latency,
    UpdateRate,
}

impl MetricId {
    pub const ALL: [MetricId; 5] = [
        Self::HorizontalAccuracy,
        Self::VerticalAccuracy,
        Self::OrientationAccuracy,
        Self::Latency,
        Self::UpdateRate,
    ];

    /// Quantile-gated metrics.
    pub fn is_distributional(self) -> bool {
        matches!(
            self,
            Self::HorizontalAccuracy | Self::VerticalAccuracy | Self::OrientationAccuracy
        )
    }

    /// Unit the performance results report this metric in.
    pub fn native_unit(self) -> Unit {
        match self {
            Self::HorizontalAccuracy | Self::VerticalAccuracy => Unit::Mm,
            Self::OrientationAccuracy => Unit::Deg,
            Self::Latency => Unit::Ms,
            Self::UpdateRate => Unit::Hz,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::HorizontalAccuracy => "horizontal_accuracy",
            Self::VerticalAccuracy => "vertical_accuracy",
            Self::OrientationAccuracy => "orientation_accuracy",
            Self::Latency => "latency",
            Self::UpdateRate => "update_rate",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Mm,
    M,
    Deg,
    Ms,
    S,
    Hz,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Mm => "mm",
            Self::M => "m",
            Self::Deg => "°",
            Self::Ms => "ms",
            Self::S => "s",
            Self::Hz => "Hz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    pub unit: Unit,
}

impl Threshold {
    /// Threshold converted to the metric's native unit.
    pub fn in_native(&self, metric: MetricId) -> Result<f64, RequirementError> {
        let v = self.value;
        match (metric.native_unit(), self.unit) {
            (a, b) if a == b => Ok(v),
            (Unit::Mm, Unit::M) => Ok(v * 1000.0),
            (Unit::Ms, Unit::S) => Ok(v * 1000.0),
            (_, unit) => Err(RequirementError::Invalid(format!(
                "unit {} does not apply to {metric}",
                unit.symbol()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The measured value must stay strictly below the threshold.
    Max,
    /// The measured value must stay strictly above the threshold.
    Min,
}

impl Direction {
    pub fn holds(self, measured: f64, threshold: f64) -> bool {
        match self {
            Self::Max => measured < threshold,
            Self::Min => measured > threshold,
        }
    }
}

/// `must` gates overall suitability; `shall` only feeds the benefit score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obligation {
    Shall,
    Must,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub metric_id: MetricId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantile: Option<f64>,
    pub threshold: Threshold,
    pub direction: Direction,
    pub obligation: Obligation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benefit_weight: Option<f64>,
}

impl Requirement {
    pub fn validate(&self) -> Result<(), RequirementError> {
        let m = self.metric_id;
        if !(self.threshold.value > 0.0 && self.threshold.value.is_finite()) {
            return Err(RequirementError::Invalid(format!(
                "{m}: threshold must be positive, got {}",
                self.threshold.value
            )));
        }
        self.threshold.in_native(m)?;
        match (m.is_distributional(), self.quantile) {
            (true, None) => {
                return Err(RequirementError::Invalid(format!("{m} needs a quantile")))
            }
            (false, Some(_)) => {
                return Err(RequirementError::Invalid(format!("{m} takes no quantile")))
            }
            (true, Some(q)) if !(q > 0.0 && q < 1.0) => {
                return Err(RequirementError::Invalid(format!(
                    "{m}: quantile must lie in (0, 1), got {q}"
                )))
            }
            _ => {}
        }
        if let Some(w) = self.benefit_weight {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(RequirementError::Invalid(format!(
                    "{m}: benefit weight must be non-negative, got {w}"
                )));
            }
        }
        Ok(())
    }

    /// Compact form such as `Q99.9 < 200 mm` or `> 20 Hz`.
    pub fn describe(&self) -> String {
        let op = match self.direction {
            Direction::Max => "<",
            Direction::Min => ">",
        };
        let q = self
            .quantile
            .map(|q| format!("Q{} ", trim_float(q * 100.0)))
            .unwrap_or_default();
        let sep = if self.threshold.unit == Unit::Deg { "" } else { " " };
        format!(
            "{q}{op} {}{sep}{}",
            trim_float(self.threshold.value),
            self.threshold.unit.symbol()
        )
    }
}

fn trim_float(v: f64) -> String {
    let s = format!("{:.6}", v);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicationProfile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub requirements: Vec<Requirement>,
}

impl ApplicationProfile {
    pub fn validate(&self) -> Result<(), RequirementError> {
        let mut seen = BTreeSet::new();
        for r in &self.requirements {
            r.validate()?;
            let key = (r.metric_id, r.quantile.map(f64::to_bits));
            if !seen.insert(key) {
                return Err(RequirementError::Invalid(format!(
                    "profile `{}` has two requirements on {}{}",
                    self.name,
                    r.metric_id,
                    r.quantile.map(|q| format!(" at q = {q}")).unwrap_or_default()
                )));
            }
        }
        Ok(())
    }

    /// Quantiles the profile needs from the performance results.
    pub fn quantiles(&self) -> Vec<f64> {
        let mut qs: Vec<f64> = self.requirements.iter().filter_map(|r| r.quantile).collect();
        qs.sort_by(f64::total_cmp);
        qs.dedup();
        qs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(metric_id: MetricId, quantile: Option<f64>, value: f64, unit: Unit) -> Requirement {
        Requirement {
            metric_id,
            quantile,
            threshold: Threshold { value, unit },
            direction: Direction::Max,
            obligation: Obligation::Must,
            benefit_weight: None,
        }
    }

    #[test]
    fn units() {
        let r = req(MetricId::HorizontalAccuracy, Some(0.95), 1.0, Unit::M);
        assert_eq!(r.threshold.in_native(r.metric_id).unwrap(), 1000.0);
        let r = req(MetricId::Latency, None, 10.0, Unit::S);
        assert_eq!(r.threshold.in_native(r.metric_id).unwrap(), 10_000.0);
        let r = req(MetricId::Latency, None, 10.0, Unit::Mm);
        assert!(r.validate().is_err());
    }

    #[test]
    fn quantile_presence() {
        assert!(req(MetricId::HorizontalAccuracy, None, 1.0, Unit::Mm).validate().is_err());
        assert!(req(MetricId::Latency, Some(0.9), 1.0, Unit::Ms).validate().is_err());
        assert!(req(MetricId::HorizontalAccuracy, Some(1.0), 1.0, Unit::Mm).validate().is_err());
        assert!(req(MetricId::HorizontalAccuracy, Some(0.999), 0.0, Unit::Mm).validate().is_err());
    }

    #[test]
    fn strict_comparison() {
        assert!(!Direction::Max.holds(50.0, 50.0));
        assert!(!Direction::Min.holds(20.0, 20.0));
        assert!(Direction::Min.holds(20.4, 20.0));
    }

    #[test]
    fn describe() {
        assert_eq!(
            req(MetricId::HorizontalAccuracy, Some(0.999), 200.0, Unit::Mm).describe(),
            "Q99.9 < 200 mm"
        );
        assert_eq!(
            req(MetricId::OrientationAccuracy, Some(0.9999), 4.0, Unit::Deg).describe(),
            "Q99.99 < 4°"
        );
    }

    #[test]
    fn duplicate_rows_rejected() {
        let r = req(MetricId::HorizontalAccuracy, Some(0.95), 1.0, Unit::M);
        let p = ApplicationProfile {
            name: "x".into(),
            description: None,
            requirements: vec![r.clone(), r],
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn unknown_metric_is_a_schema_error() {
        let yaml = "metric_id: jitter\nthreshold: {value: 1, unit: ms}\ndirection: max\nobligation: must\n";
        assert!(serde_yaml::from_str::<Requirement>(yaml).is_err());
    }
}
