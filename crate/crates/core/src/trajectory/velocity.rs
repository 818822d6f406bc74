use nalgebra::Vector3;

use super::{Pose, Timestamp, Trajectory, TrajectoryError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    /// mm/s; z is 0 when the trajectory has no vertical component.
    pub vector: Vector3<f64>,
    /// Euclidean norm of `vector`, mm/s.
    pub speed: f64,
}

fn difference(a: &Pose, b: &Pose) -> Velocity {
    let dt = b.t.secs_since(a.t);
    let vector = (b.position() - a.position()) / dt;
    Velocity {
        vector,
        speed: vector.norm(),
    }
}

/// Finite-difference velocity at `t`.
///
/// Strictly between two samples the enclosing pair is differenced; at an
/// interior sample node the two neighbours are (central difference).
/// `half_window > 0` widens the pair symmetrically by that many samples on
/// each side, shrinking near the ends so the stencil stays symmetric.
pub fn estimate_velocity(
    traj: &Trajectory,
    t: Timestamp,
    half_window: usize,
) -> Result<Velocity, TrajectoryError> {
    let s = traj.samples();
    let n = s.len();
    if n < 2 || t <= s[0].t || t >= s[n - 1].t {
        return Err(TrajectoryError::Boundary { t });
    }
    let (lo, hi) = match s.binary_search_by(|p| p.t.cmp(&t)) {
        Ok(k) => (k - 1, k + 1),
        Err(upper) => (upper - 1, upper),
    };
    let w = half_window.min(lo).min(n - 1 - hi);
    Ok(difference(&s[lo - w], &s[hi + w]))
}

/// Speed (mm/s) of the linear segment `[samples[i], samples[i+1]]`.
pub fn segment_speed(traj: &Trajectory, i: usize) -> f64 {
    let s = traj.samples();
    difference(&s[i], &s[i + 1]).speed
}
