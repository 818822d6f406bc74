use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ErrorModel, TestbedError};
use crate::angle::wrap_360;
use crate::trajectory::{interpolate_pose, Pose, Source, Timestamp, Trajectory};

/// Nominal emission instants `t0 + k / rate` up to the end of the ground truth.
pub fn emission_schedule(first: Timestamp, last: Timestamp, rate_hz: f64) -> Vec<Timestamp> {
    let period_ns = 1e9 / rate_hz;
    (0..)
        .map(|k: i64| first + (k as f64 * period_ns).round() as i64)
        .take_while(|t| *t <= last)
        .collect()
}

/// Simulated LTS stream for `gt` under `em`.
///
/// For every emission instant `t` whose delayed content time `t - latency`
/// lies inside the ground truth, one uniform draw decides dropout; a kept
/// sample then draws three position normals and one heading normal, in that
/// order, from a single generator seeded with `em.seed`.
pub fn simulate_lts(gt: &Trajectory, em: &ErrorModel) -> Result<Trajectory, TestbedError> {
    em.validate()?;
    let (Some(first), Some(last)) = (gt.first_time(), gt.last_time()) else {
        return Err(TestbedError::NoEmittableSamples);
    };
    let latency_ns = (em.latency_s * 1e9).round() as i64;
    if latency_ns >= last - first {
        return Err(TestbedError::NoEmittableSamples);
    }
    let clock_ns = (em.clock_offset_s * 1e9).round() as i64;
    let has_heading = em.provides_heading && gt.capabilities().has_heading;
    let mut rng = ChaCha8Rng::seed_from_u64(em.seed);
    let mut scheduled = 0usize;
    let mut samples = Vec::new();

    for t in emission_schedule(first, last, em.update_rate_hz) {
        let content_t = t + (-latency_ns);
        if content_t < first {
            continue;
        }
        scheduled += 1;
        if rng.random::<f64>() < em.dropout_prob {
            continue;
        }
        let noise: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));

        let g = interpolate_pose(gt, content_t)?;
        let mapped = em.frame_error.apply_pose(&g);
        let elapsed = content_t.secs_since(first);
        let p = mapped.position()
            + Vector3::from(em.bias_mm)
            + Vector3::from(em.drift_mm_per_s) * elapsed
            + Vector3::new(
                em.noise_sigma_mm[0] * noise[0],
                em.noise_sigma_mm[1] * noise[1],
                em.noise_sigma_mm[2] * noise[2],
            );
        let mut pose = Pose::planar(t + clock_ns, p.x, p.y);
        if em.provides_vertical {
            pose = pose.with_z(p.z);
        }
        if has_heading {
            if let Some(h) = mapped.heading() {
                pose.yaw_deg = Some(wrap_360(h + em.heading_noise_sigma_deg * noise[3]));
            }
        }
        samples.push(pose);
    }
    if scheduled == 0 {
        return Err(TestbedError::NoEmittableSamples);
    }
    Ok(Trajectory::new(Source::Lts, samples)?)
}
