use super::{MetricError, Marker, Reported};

/// Smallest sample count at which the `q` quantile is witnessed,
/// `ceil(1 / (1 - q))`.
pub fn min_samples_for(q: f64) -> usize {
    (1.0 / (1.0 - q) - 1e-6).ceil().max(1.0) as usize
}

fn check_q(q: f64) -> Result<(), MetricError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(MetricError::InvalidQuantile(q))
    }
}

/// Nearest-rank empirical quantile: the `ceil(q n)`-th smallest sample.
///
/// Returns [`Marker::InsufficientSamples`] when fewer than
/// [`min_samples_for`]`(q)` samples are available.
pub fn quantile(samples: &[f64], q: f64) -> Result<Reported<f64>, MetricError> {
    check_q(q)?;
    if samples.is_empty() {
        return Err(MetricError::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, q))
}

pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> Reported<f64> {
    let n = sorted.len();
    if n < min_samples_for(q) {
        return Marker::InsufficientSamples.into();
    }
    let rank = ((q * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    Reported::Value(sorted[rank - 1])
}

pub(crate) fn validate_quantiles(qs: &[f64]) -> Result<(), MetricError> {
    qs.iter().try_for_each(|&q| check_q(q))
}
