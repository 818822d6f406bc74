//! Trajectory CSV files.
//!
//! Header: `t_ns,x_mm,y_mm,z_mm,yaw_deg,qw,qx,qy,qz`. Absent optional fields
//! are empty cells; rows are sorted by `t_ns`.

use std::io::{Read, Write};

use nalgebra::{Quaternion, UnitQuaternion};
use serde::{Deserialize, Serialize};

use super::{Pose, Source, Timestamp, Trajectory, TrajectoryError};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    t_ns: i64,
    x_mm: f64,
    y_mm: f64,
    z_mm: Option<f64>,
    yaw_deg: Option<f64>,
    qw: Option<f64>,
    qx: Option<f64>,
    qy: Option<f64>,
    qz: Option<f64>,
}

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), TrajectoryError> {
    let mut w = csv::Writer::from_writer(out);
    for p in traj.samples() {
        let q = p.orientation.map(|q| q.into_inner());
        w.serialize(Row {
            t_ns: p.t.nanos(),
            x_mm: p.x,
            y_mm: p.y,
            z_mm: p.z,
            yaw_deg: p.yaw_deg,
            qw: q.map(|q| q.w),
            qx: q.map(|q| q.i),
            qy: q.map(|q| q.j),
            qz: q.map(|q| q.k),
        })?;
    }
    if traj.is_empty() {
        w.write_record(["t_ns", "x_mm", "y_mm", "z_mm", "yaw_deg", "qw", "qx", "qy", "qz"])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(source: Source, input: R) -> Result<Trajectory, TrajectoryError> {
    let mut r = csv::Reader::from_reader(input);
    let mut samples = Vec::new();
    for (i, row) in r.deserialize::<Row>().enumerate() {
        let row = row?;
        let orientation = match (row.qw, row.qx, row.qy, row.qz) {
            (Some(w), Some(x), Some(y), Some(z)) => {
                let q = Quaternion::new(w, x, y, z);
                if (q.norm() - 1.0).abs() > 1e-9 {
                    return Err(TrajectoryError::CsvRow {
                        row: i + 1,
                        reason: "quaternion is not unit norm".into(),
                    });
                }
                Some(UnitQuaternion::new_unchecked(q))
            }
            (None, None, None, None) => None,
            _ => {
                return Err(TrajectoryError::CsvRow {
                    row: i + 1,
                    reason: "partial quaternion".into(),
                })
            }
        };
        samples.push(Pose {
            t: Timestamp(row.t_ns),
            x: row.x_mm,
            y: row.y_mm,
            z: row.z_mm,
            yaw_deg: row.yaw_deg,
            orientation,
        });
    }
    Trajectory::new(source, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle;

    #[test]
    fn round_trip_with_gaps() {
        let samples = vec![
            Pose::planar(Timestamp(0), 1.5, -2.25).with_yaw(10.0),
            Pose::planar(Timestamp(1_000), 0.1 + 0.2, 1e-7).with_yaw(359.999),
        ];
        let tr = Trajectory::new(Source::Lts, samples).unwrap();
        let mut buf = Vec::new();
        write_csv(&tr, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t_ns,x_mm,y_mm,z_mm,yaw_deg,qw,qx,qy,qz\n"));
        assert!(text.lines().nth(1).unwrap().starts_with("0,1.5,-2.25,,10.0,,,,"));
        let back = read_csv(Source::Lts, buf.as_slice()).unwrap();
        assert_eq!(back, tr);
    }

    #[test]
    fn quaternion_round_trip() {
        let q = angle::yaw_quaternion(33.0);
        let p = Pose::planar(Timestamp(5), 0.0, 0.0)
            .with_z(1.0)
            .with_yaw(angle::quaternion_yaw(&q))
            .with_orientation(q);
        let tr = Trajectory::new(Source::GroundTruth, vec![p]).unwrap();
        let mut buf = Vec::new();
        write_csv(&tr, &mut buf).unwrap();
        let back = read_csv(Source::GroundTruth, buf.as_slice()).unwrap();
        assert_eq!(back, tr);
        assert!(back.capabilities().has_orientation3d);
    }

    #[test]
    fn rejects_unsorted_rows() {
        let text = "t_ns,x_mm,y_mm,z_mm,yaw_deg,qw,qx,qy,qz\n5,0,0,,,,,,\n4,0,0,,,,,,\n";
        assert!(matches!(
            read_csv(Source::Lts, text.as_bytes()),
            Err(TrajectoryError::NonIncreasingTime { index: 1 })
        ));
    }
}
