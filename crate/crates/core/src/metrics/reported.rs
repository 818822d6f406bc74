use serde::{Deserialize, Serialize};

/// Why a metric carries no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Marker {
    /// The LTS does not report this quantity.
    NotProvided,
    /// Too few samples to witness the requested quantile.
    InsufficientSamples,
    /// No sample above the speed threshold.
    InsufficientDynamicSamples,
    NotComputable,
    Unobservable,
}

impl std::fmt::Display for Marker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NotProvided => "not_provided",
            Self::InsufficientSamples => "insufficient_samples",
            Self::InsufficientDynamicSamples => "insufficient_dynamic_samples",
            Self::NotComputable => "not_computable",
            Self::Unobservable => "unobservable",
        })
    }
}

/// A metric value or the reason it is absent. Serialises as the bare value
/// or the snake_case marker string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Reported<T> {
    Value(T),
    Missing(Marker),
}

impl<T> Reported<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Self::Value(v) => Some(v),
            Self::Missing(_) => None,
        }
    }

    pub fn marker(&self) -> Option<Marker> {
        match self {
            Self::Value(_) => None,
            Self::Missing(m) => Some(*m),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Reported<U> {
        match self {
            Self::Value(v) => Reported::Value(f(v)),
            Self::Missing(m) => Reported::Missing(m),
        }
    }
}

impl<T> From<Marker> for Reported<T> {
    fn from(m: Marker) -> Self {
        Self::Missing(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yaml_shape() {
        let v: Reported<f64> = Reported::Value(1.5);
        assert_eq!(serde_yaml::to_string(&v).unwrap().trim(), "1.5");
        let m: Reported<f64> = Marker::InsufficientSamples.into();
        assert_eq!(serde_yaml::to_string(&m).unwrap().trim(), "insufficient_samples");
        let back: Reported<f64> = serde_yaml::from_str("not_provided").unwrap();
        assert_eq!(back, Reported::Missing(Marker::NotProvided));
        let back: Reported<f64> = serde_yaml::from_str("2.0").unwrap();
        assert_eq!(back.value(), Some(&2.0));
    }
}
