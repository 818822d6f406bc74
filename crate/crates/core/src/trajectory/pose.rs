use std::fmt;
use std::ops::{Add, Sub};

use nalgebra::{UnitQuaternion, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::TrajectoryError;
use crate::angle;

/// Nanoseconds since an arbitrary epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub const fn from_nanos(ns: i64) -> Self {
        Self(ns)
    }

    /// Rounds to the nearest nanosecond.
    pub fn from_secs_f64(s: f64) -> Self {
        Self((s * 1e9).round() as i64)
    }

    pub const fn nanos(self) -> i64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 * 1e-9
    }

    /// Shifts by a duration given in seconds (rounded to 1 ns).
    pub fn offset_secs(self, s: f64) -> Self {
        Self(self.0 + (s * 1e9).round() as i64)
    }

    /// `self - earlier` in seconds.
    pub fn secs_since(self, earlier: Timestamp) -> f64 {
        (self.0 - earlier.0) as f64 * 1e-9
    }
}

impl Add<i64> for Timestamp {
    type Output = Timestamp;
    fn add(self, ns: i64) -> Timestamp {
        Timestamp(self.0 + ns)
    }
}

impl Sub for Timestamp {
    type Output = i64;
    fn sub(self, rhs: Timestamp) -> i64 {
        self.0 - rhs.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.9} s", self.as_secs_f64())
    }
}

/// A timestamped pose with up to six degrees of freedom.
///
/// Position is in millimetres; the vertical component is optional because
/// many systems only report planar positions. `yaw_deg` is the heading in
/// `[0, 360)`, counter-clockwise from +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub t: Timestamp,
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
    pub yaw_deg: Option<f64>,
    pub orientation: Option<UnitQuaternion<f64>>,
}

impl Pose {
    pub fn planar(t: Timestamp, x: f64, y: f64) -> Self {
        Self {
            t,
            x,
            y,
            z: None,
            yaw_deg: None,
            orientation: None,
        }
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = Some(z);
        self
    }

    pub fn with_yaw(mut self, yaw_deg: f64) -> Self {
        self.yaw_deg = Some(angle::wrap_360(yaw_deg));
        self
    }

    pub fn with_orientation(mut self, q: UnitQuaternion<f64>) -> Self {
        self.orientation = Some(q);
        self
    }

    pub fn horizontal(&self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    /// Position with a missing vertical component taken as 0.
    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z.unwrap_or(0.0))
    }

    /// Heading from `yaw_deg`, falling back to the quaternion's yaw.
    pub fn heading(&self) -> Option<f64> {
        self.yaw_deg
            .or_else(|| self.orientation.as_ref().map(angle::quaternion_yaw))
    }

    pub(crate) fn check(&self) -> Result<(), TrajectoryError> {
        let finite = self.x.is_finite()
            && self.y.is_finite()
            && self.z.is_none_or(f64::is_finite)
            && self.yaw_deg.is_none_or(f64::is_finite);
        if !finite {
            return Err(TrajectoryError::InvalidPose {
                t: self.t,
                reason: "non-finite field".into(),
            });
        }
        if let Some(yaw) = self.yaw_deg {
            if !(0.0..360.0).contains(&yaw) {
                return Err(TrajectoryError::InvalidPose {
                    t: self.t,
                    reason: format!("heading {yaw} outside [0, 360)"),
                });
            }
        }
        if let Some(q) = &self.orientation {
            let c = q.as_ref().coords;
            if !c.iter().all(|v| v.is_finite()) || (c.norm() - 1.0).abs() > 1e-9 {
                return Err(TrajectoryError::InvalidPose {
                    t: self.t,
                    reason: "quaternion is not unit norm".into(),
                });
            }
            if let Some(yaw) = self.yaw_deg {
                let qyaw = angle::quaternion_yaw(q);
                if angle::shortest_arc(yaw, qyaw).abs() > 1e-6 {
                    return Err(TrajectoryError::InvalidPose {
                        t: self.t,
                        reason: format!("heading {yaw} disagrees with quaternion yaw {qyaw}"),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    GroundTruth,
    Lts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Capabilities {
    pub has_vertical: bool,
    pub has_heading: bool,
    pub has_orientation3d: bool,
}

impl Capabilities {
    fn of(p: &Pose) -> Self {
        Self {
            has_vertical: p.z.is_some(),
            has_heading: p.yaw_deg.is_some(),
            has_orientation3d: p.orientation.is_some(),
        }
    }
}

/// A time-ordered pose series from a single source.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    source: Source,
    capabilities: Capabilities,
    samples: Vec<Pose>,
}

impl Trajectory {
    /// Validates and wraps `samples`. Capabilities are taken from the first
    /// sample; every other sample must carry the same optional fields.
    pub fn new(source: Source, samples: Vec<Pose>) -> Result<Self, TrajectoryError> {
        let capabilities = samples.first().map(Capabilities::of).unwrap_or_default();
        for (i, p) in samples.iter().enumerate() {
            p.check()?;
            if Capabilities::of(p) != capabilities {
                return Err(TrajectoryError::InconsistentCapabilities { index: i });
            }
            if i > 0 && p.t <= samples[i - 1].t {
                return Err(TrajectoryError::NonIncreasingTime { index: i });
            }
        }
        Ok(Self {
            source,
            capabilities,
            samples,
        })
    }

    pub fn empty(source: Source) -> Self {
        Self {
            source,
            capabilities: Capabilities::default(),
            samples: Vec::new(),
        }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn capabilities(&self) -> Capabilities {
        self.capabilities
    }

    pub fn samples(&self) -> &[Pose] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first_time(&self) -> Option<Timestamp> {
        self.samples.first().map(|p| p.t)
    }

    pub fn last_time(&self) -> Option<Timestamp> {
        self.samples.last().map(|p| p.t)
    }

    pub fn duration_s(&self) -> f64 {
        match (self.first_time(), self.last_time()) {
            (Some(a), Some(b)) => b.secs_since(a),
            _ => 0.0,
        }
    }

    pub fn into_samples(self) -> Vec<Pose> {
        self.samples
    }

    /// Applies `f` to every sample and revalidates.
    pub fn map_samples(&self, f: impl FnMut(&Pose) -> Pose) -> Result<Self, TrajectoryError> {
        Self::new(self.source, self.samples.iter().map(f).collect())
    }

    /// Shifts every timestamp by `ns`.
    pub fn shifted(&self, ns: i64) -> Self {
        Self {
            source: self.source,
            capabilities: self.capabilities,
            samples: self
                .samples
                .iter()
                .map(|p| Pose { t: p.t + ns, ..*p })
                .collect(),
        }
    }

    pub(crate) fn require_len(&self, n: usize) -> Result<(), TrajectoryError> {
        if self.samples.len() < n {
            Err(TrajectoryError::TooShort {
                needed: n,
                got: self.samples.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Index `i` of the segment `[samples[i], samples[i+1]]` containing `t`,
    /// with `t == samples[i].t` mapping to segment `i` (or the last segment
    /// at the final node). `None` outside the covered range.
    pub(crate) fn segment_index(&self, t: Timestamp) -> Option<usize> {
        let n = self.samples.len();
        if n < 2 || t < self.samples[0].t || t > self.samples[n - 1].t {
            return None;
        }
        let upper = self.samples.partition_point(|p| p.t <= t);
        Some((upper - 1).min(n - 2))
    }
}
