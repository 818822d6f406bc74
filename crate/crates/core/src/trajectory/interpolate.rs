use super::{Pose, Timestamp, Trajectory, TrajectoryError};
use crate::angle;

/// Pose of `traj` at time `t`.
///
/// Sample nodes are returned unchanged. Between nodes the position is linear
/// per axis, the heading follows the shortest arc and the quaternion is
/// slerped. When a quaternion is present the heading is taken from the
/// interpolated quaternion so both stay consistent.
pub fn interpolate_pose(traj: &Trajectory, t: Timestamp) -> Result<Pose, TrajectoryError> {
    let samples = traj.samples();
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => return Err(TrajectoryError::TooShort { needed: 1, got: 0 }),
    };
    if t < first || t > last {
        return Err(TrajectoryError::Extrapolation { t, first, last });
    }
    if let Ok(i) = samples.binary_search_by(|p| p.t.cmp(&t)) {
        return Ok(samples[i]);
    }
    let i = traj.segment_index(t).expect("t inside range");
    let (a, b) = (&samples[i], &samples[i + 1]);
    let frac = (t - a.t) as f64 / (b.t - a.t) as f64;
    Ok(lerp_pose(a, b, frac, t))
}

pub(crate) fn lerp_pose(a: &Pose, b: &Pose, frac: f64, t: Timestamp) -> Pose {
    let lerp = |u: f64, v: f64| u + (v - u) * frac;
    let orientation = match (&a.orientation, &b.orientation) {
        (Some(qa), Some(qb)) => Some(angle::slerp(qa, qb, frac)),
        _ => None,
    };
    let yaw_deg = match (a.yaw_deg, b.yaw_deg) {
        (Some(ha), Some(hb)) => Some(match &orientation {
            Some(q) => angle::quaternion_yaw(q),
            None => angle::lerp_heading(ha, hb, frac),
        }),
        _ => None,
    };
    Pose {
        t,
        x: lerp(a.x, b.x),
        y: lerp(a.y, b.y),
        z: a.z.zip(b.z).map(|(za, zb)| lerp(za, zb)),
        yaw_deg,
        orientation,
    }
}
