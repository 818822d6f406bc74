use nalgebra::{Matrix3, Quaternion, Rotation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use super::AlignmentError;
use crate::angle;
use crate::trajectory::{Pose, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignMode {
    #[serde(rename = "planar2d")]
    Planar2D,
    #[serde(rename = "spatial3d")]
    Spatial3D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rotation {
    /// Rotation about +z, degrees.
    Yaw(f64),
    Quaternion(UnitQuaternion<f64>),
}

/// Proper rigid transform `p -> R p + t` (no scale, no reflection).
///
/// In planar mode the vertical component of points passes through unchanged
/// and the translation has no vertical part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransformRepr", into = "TransformRepr")]
pub struct RigidTransform {
    rotation: Rotation,
    translation: Vector3<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TransformRepr {
    mode: AlignMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    yaw_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quaternion_wxyz: Option<[f64; 4]>,
    translation_mm: [f64; 3],
}

impl TryFrom<TransformRepr> for RigidTransform {
    type Error = AlignmentError;

    fn try_from(r: TransformRepr) -> Result<Self, Self::Error> {
        let [tx, ty, tz] = r.translation_mm;
        match (r.mode, r.yaw_deg, r.quaternion_wxyz) {
            (AlignMode::Planar2D, Some(yaw), None) => {
                if tz != 0.0 {
                    return Err(AlignmentError::InvalidTransform(
                        "planar transform with vertical translation".into(),
                    ));
                }
                Ok(Self::planar(yaw, tx, ty))
            }
            (AlignMode::Spatial3D, None, Some([w, x, y, z])) => {
                let q = Quaternion::new(w, x, y, z);
                if (q.norm() - 1.0).abs() > 1e-9 {
                    return Err(AlignmentError::InvalidTransform(
                        "quaternion is not unit norm".into(),
                    ));
                }
                Ok(Self::spatial(
                    UnitQuaternion::new_unchecked(q),
                    Vector3::new(tx, ty, tz),
                ))
            }
            _ => Err(AlignmentError::InvalidTransform(
                "planar2d needs yaw_deg, spatial3d needs quaternion_wxyz".into(),
            )),
        }
    }
}

impl From<RigidTransform> for TransformRepr {
    fn from(xf: RigidTransform) -> Self {
        let t = xf.translation;
        match xf.rotation {
            Rotation::Yaw(yaw) => Self {
                mode: AlignMode::Planar2D,
                yaw_deg: Some(yaw),
                quaternion_wxyz: None,
                translation_mm: [t.x, t.y, 0.0],
            },
            Rotation::Quaternion(q) => Self {
                mode: AlignMode::Spatial3D,
                yaw_deg: None,
                quaternion_wxyz: Some([q.w, q.i, q.j, q.k]),
                translation_mm: [t.x, t.y, t.z],
            },
        }
    }
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self::planar(0.0, 0.0, 0.0)
    }

    pub fn planar(yaw_deg: f64, tx: f64, ty: f64) -> Self {
        Self {
            rotation: Rotation::Yaw(yaw_deg),
            translation: Vector3::new(tx, ty, 0.0),
        }
    }

    pub fn spatial(q: UnitQuaternion<f64>, translation: Vector3<f64>) -> Self {
        Self {
            rotation: Rotation::Quaternion(q),
            translation,
        }
    }

    pub fn mode(&self) -> AlignMode {
        match self.rotation {
            Rotation::Yaw(_) => AlignMode::Planar2D,
            Rotation::Quaternion(_) => AlignMode::Spatial3D,
        }
    }

    pub fn rotation(&self) -> Rotation {
        self.rotation
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.translation
    }

    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        match self.rotation {
            Rotation::Yaw(yaw) => angle::yaw_quaternion(yaw),
            Rotation::Quaternion(q) => q,
        }
    }

    /// Yaw of the rotation in `(-180, 180]`.
    pub fn yaw_deg(&self) -> f64 {
        match self.rotation {
            Rotation::Yaw(yaw) => angle::wrap_180(yaw),
            Rotation::Quaternion(q) => angle::wrap_180(angle::quaternion_yaw(&q)),
        }
    }

    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        match self.rotation {
            Rotation::Yaw(yaw) => {
                let (s, c) = yaw.to_radians().sin_cos();
                Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
            }
            Rotation::Quaternion(q) => *q.to_rotation_matrix().matrix(),
        }
    }

    pub fn apply_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation_matrix() * p + self.translation
    }

    pub fn inverse(&self) -> Self {
        match self.rotation {
            Rotation::Yaw(yaw) => {
                let inv = Self::planar(-yaw, 0.0, 0.0);
                let t = -inv.apply_point(&self.translation);
                Self::planar(-yaw, t.x, t.y)
            }
            Rotation::Quaternion(q) => {
                let qi = q.inverse();
                Self::spatial(qi, -(qi * self.translation))
            }
        }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let translation = self.rotation_matrix() * other.translation + self.translation;
        match (self.rotation, other.rotation) {
            (Rotation::Yaw(a), Rotation::Yaw(b)) => Self::planar(a + b, translation.x, translation.y),
            _ => Self::spatial(self.quaternion() * other.quaternion(), translation),
        }
    }

    pub(crate) fn from_matrix(r: &Matrix3<f64>, translation: Vector3<f64>) -> Self {
        let rot = Rotation3::from_matrix_unchecked(*r);
        Self::spatial(UnitQuaternion::from_rotation_matrix(&rot), translation)
    }

    pub fn apply_pose(&self, p: &Pose) -> Pose {
        let moved = self.apply_point(&p.position());
        let (yaw_deg, orientation) = match self.rotation {
            Rotation::Yaw(yaw) => (
                p.yaw_deg.map(|h| angle::wrap_360(h + yaw)),
                p.orientation.map(|q| angle::yaw_quaternion(yaw) * q),
            ),
            Rotation::Quaternion(r) => {
                let orientation = p.orientation.map(|q| r * q);
                let yaw_deg = match (&orientation, p.yaw_deg) {
                    (Some(q), Some(_)) => Some(angle::quaternion_yaw(q)),
                    (None, Some(h)) => Some(angle::quaternion_yaw(&(r * angle::yaw_quaternion(h)))),
                    _ => None,
                };
                (yaw_deg, orientation)
            }
        };
        let yaw_deg = match (&orientation, yaw_deg) {
            (Some(q), Some(_)) => Some(angle::quaternion_yaw(q)),
            (_, h) => h,
        };
        Pose {
            t: p.t,
            x: moved.x,
            y: moved.y,
            z: p.z.map(|_| moved.z),
            yaw_deg,
            orientation,
        }
    }
}

/// Maps every pose of `traj` through `xf`; timestamps are unchanged.
pub fn apply_transform(traj: &Trajectory, xf: &RigidTransform) -> Trajectory {
    traj.map_samples(|p| xf.apply_pose(p))
        .expect("rigid transforms preserve trajectory invariants")
}
