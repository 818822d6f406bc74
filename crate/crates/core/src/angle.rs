//! Angle helpers. All angles are in degrees.

use nalgebra::UnitQuaternion;

/// Wraps an angle into `[0, 360)`.
pub fn wrap_360(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    // rem_euclid can return 360.0 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into `(-180, 180]`.
pub fn wrap_180(deg: f64) -> f64 {
    let w = wrap_360(deg);
    if w > 180.0 {
        w - 360.0
    } else {
        w
    }
}

/// Signed shortest-arc difference `to - from`, in `(-180, 180]`.
pub fn shortest_arc(from: f64, to: f64) -> f64 {
    wrap_180(to - from)
}

/// Interpolates between two headings along the shortest arc. Result in `[0, 360)`.
pub fn lerp_heading(from: f64, to: f64, frac: f64) -> f64 {
    wrap_360(from + frac * shortest_arc(from, to))
}

/// Yaw (rotation about +z) of a quaternion in `[0, 360)`.
pub fn quaternion_yaw(q: &UnitQuaternion<f64>) -> f64 {
    let (_, _, yaw) = q.euler_angles();
    wrap_360(yaw.to_degrees())
}

/// Pure-yaw rotation.
pub fn yaw_quaternion(yaw_deg: f64) -> UnitQuaternion<f64> {
    UnitQuaternion::from_euler_angles(0.0, 0.0, yaw_deg.to_radians())
}

/// Spherical linear interpolation along the shorter great arc.
pub fn slerp(a: &UnitQuaternion<f64>, b: &UnitQuaternion<f64>, frac: f64) -> UnitQuaternion<f64> {
    let qa = a.as_ref().coords;
    let mut qb = b.as_ref().coords;
    let mut dot = qa.dot(&qb);
    if dot < 0.0 {
        qb = -qb;
        dot = -dot;
    }
    let coords = if dot > 1.0 - 1e-12 {
        qa + (qb - qa) * frac
    } else {
        let theta = dot.min(1.0).acos();
        let sin_theta = theta.sin();
        qa * (((1.0 - frac) * theta).sin() / sin_theta) + qb * ((frac * theta).sin() / sin_theta)
    };
    UnitQuaternion::from_quaternion(nalgebra::Quaternion::from(coords))
}
