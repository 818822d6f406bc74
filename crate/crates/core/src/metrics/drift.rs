use serde::{Deserialize, Serialize};

use super::{ErrorSample, MetricError};

pub const MIN_DRIFT_SAMPLES: usize = 10;
pub const MIN_DRIFT_SPAN_S: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub slope_mm_per_s: f64,
    pub intercept_mm: f64,
    /// Absent when the horizontal error is constant.
    pub r_squared: Option<f64>,
    pub sample_count: usize,
}

/// Least-squares line through horizontal error against time.
pub fn compute_drift(samples: &[ErrorSample]) -> Result<Drift, MetricError> {
    let n = samples.len();
    let (t_min, t_max) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| {
        (a.min(s.t_s), b.max(s.t_s))
    });
    if n < MIN_DRIFT_SAMPLES || !(t_max - t_min >= MIN_DRIFT_SPAN_S) {
        return Err(MetricError::InsufficientData(format!(
            "drift needs {MIN_DRIFT_SAMPLES} samples over {MIN_DRIFT_SPAN_S} s, got {n} over {:.3} s",
            (t_max - t_min).max(0.0)
        )));
    }
    let nf = n as f64;
    let mt = samples.iter().map(|s| s.t_s).sum::<f64>() / nf;
    let me = samples.iter().map(|s| s.horizontal_mm).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for s in samples {
        let (dt, de) = (s.t_s - mt, s.horizontal_mm - me);
        sxx += dt * dt;
        sxy += dt * de;
        syy += de * de;
    }
    let slope = sxy / sxx;
    Ok(Drift {
        slope_mm_per_s: slope,
        intercept_mm: me - slope * mt,
        r_squared: (syy > 0.0).then(|| (sxy * sxy / (sxx * syy)).min(1.0)),
        sample_count: n,
    })
}
