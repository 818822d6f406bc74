use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{interpolate_pose, segment_speed, Pose, Timestamp, Trajectory};
use crate::angle;

/// A predefined target pose with pass tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPose {
    pub id: u32,
    pub x_mm: f64,
    pub y_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yaw_deg: Option<f64>,
    pub position_tolerance_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading_tolerance_deg: Option<f64>,
    #[serde(default)]
    pub required_static: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_speed_threshold_mm_s: Option<f64>,
}

impl EvaluationPose {
    /// Dynamic evaluation pose with only a position tolerance.
    pub fn at(id: u32, x_mm: f64, y_mm: f64, position_tolerance_mm: f64) -> Self {
        Self {
            id,
            x_mm,
            y_mm,
            z_mm: None,
            yaw_deg: None,
            position_tolerance_mm,
            heading_tolerance_deg: None,
            required_static: false,
            static_speed_threshold_mm_s: None,
        }
    }

    pub fn target(&self) -> Pose {
        Pose {
            t: Timestamp(0),
            x: self.x_mm,
            y: self.y_mm,
            z: self.z_mm,
            yaw_deg: self.yaw_deg.map(angle::wrap_360),
            orientation: None,
        }
    }
}

/// One tolerance-satisfying pass of the ground truth through an evaluation pose.
#[derive(Debug, Clone, PartialEq)]
pub struct Visit {
    pub eval_pose_id: u32,
    pub visit_index: u32,
    pub gt_time: Timestamp,
    pub gt_pose_at_visit: Pose,
    pub gt_speed_mm_s: f64,
    /// Distance between the ground truth and the target at `gt_time`.
    pub distance_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    seg: usize,
    s0: f64,
    s1: f64,
    t0: Timestamp,
    t1: Timestamp,
    speed: f64,
}

/// A maximal time interval during which the interpolated ground truth lies
/// inside an evaluation pose's tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceInterval {
    pub start: Timestamp,
    pub end: Timestamp,
    /// Lowest segment speed seen inside the interval, mm/s.
    pub min_speed_mm_s: f64,
    pieces: Vec<Piece>,
}

struct Geometry {
    target: Vector3<f64>,
    use_z: bool,
    radius: f64,
    heading: Option<(f64, f64)>,
}

impl Geometry {
    fn new(gt: &Trajectory, ep: &EvaluationPose) -> Self {
        let use_z = ep.z_mm.is_some() && gt.capabilities().has_vertical;
        let gt_heading = gt.samples().first().and_then(Pose::heading).is_some();
        let heading = match (ep.yaw_deg, ep.heading_tolerance_deg) {
            (Some(yaw), Some(tol)) if gt_heading => Some((angle::wrap_360(yaw), tol)),
            _ => None,
        };
        Self {
            target: Vector3::new(ep.x_mm, ep.y_mm, if use_z { ep.z_mm.unwrap() } else { 0.0 }),
            use_z,
            radius: ep.position_tolerance_mm,
            heading,
        }
    }

    fn point(&self, p: &Pose) -> Vector3<f64> {
        Vector3::new(p.x, p.y, if self.use_z { p.z.unwrap_or(0.0) } else { 0.0 })
    }

    /// Quadratic `|a + s d - c|^2 = qa s^2 + qb s + qc` of a segment.
    fn quadratic(&self, a: &Pose, b: &Pose) -> (f64, f64, f64) {
        let pa = self.point(a) - self.target;
        let d = self.point(b) - self.point(a);
        (d.norm_squared(), 2.0 * d.dot(&pa), pa.norm_squared())
    }

    fn position_range(&self, a: &Pose, b: &Pose) -> Option<(f64, f64)> {
        let (r, c) = (self.radius, &self.target);
        if a.x.min(b.x) > c.x + r
            || a.x.max(b.x) < c.x - r
            || a.y.min(b.y) > c.y + r
            || a.y.max(b.y) < c.y - r
        {
            return None;
        }
        let (qa, qb, qc) = self.quadratic(a, b);
        let qc = qc - self.radius * self.radius;
        let (lo, hi) = if qa == 0.0 {
            if qc <= 0.0 {
                (0.0, 1.0)
            } else {
                return None;
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return None;
            }
            let root = disc.sqrt();
            ((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa))
        };
        let (lo, hi) = (lo.max(0.0), hi.min(1.0));
        (lo <= hi).then_some((lo, hi))
    }

    /// Sub-ranges of `[0, 1]` where the shortest-arc heading interpolant stays
    /// within tolerance of the target heading.
    fn heading_ranges(&self, a: &Pose, b: &Pose) -> Vec<(f64, f64)> {
        let Some((target, tol)) = self.heading else {
            return vec![(0.0, 1.0)];
        };
        if tol >= 180.0 {
            return vec![(0.0, 1.0)];
        }
        let (Some(ha), Some(hb)) = (a.heading(), b.heading()) else {
            return Vec::new();
        };
        let off = angle::wrap_180(ha - target);
        let delta = angle::shortest_arc(ha, hb);
        let mut out = Vec::new();
        for m in [-1.0, 0.0, 1.0] {
            let (lo, hi) = (-tol + 360.0 * m, tol + 360.0 * m);
            let range = if delta == 0.0 {
                (lo <= off && off <= hi).then_some((0.0, 1.0))
            } else {
                let (u, v) = ((lo - off) / delta, (hi - off) / delta);
                let (u, v) = (u.min(v).max(0.0), u.max(v).min(1.0));
                (u <= v).then_some((u, v))
            };
            out.extend(range);
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }
}

fn time_at(a: &Pose, b: &Pose, s: f64) -> Timestamp {
    a.t + ((b.t - a.t) as f64 * s).round() as i64
}

/// All maximal tolerance intervals of `gt` for one evaluation pose, in time order.
pub fn tolerance_intervals(gt: &Trajectory, ep: &EvaluationPose) -> Vec<ToleranceInterval> {
    let geo = Geometry::new(gt, ep);
    let samples = gt.samples();
    let mut out: Vec<ToleranceInterval> = Vec::new();
    for seg in 0..samples.len().saturating_sub(1) {
        let (a, b) = (&samples[seg], &samples[seg + 1]);
        let Some((plo, phi)) = geo.position_range(a, b) else {
            continue;
        };
        let speed = segment_speed(gt, seg);
        for (hlo, hhi) in geo.heading_ranges(a, b) {
            let (s0, s1) = (plo.max(hlo), phi.min(hhi));
            if s0 > s1 {
                continue;
            }
            let piece = Piece {
                seg,
                s0,
                s1,
                t0: time_at(a, b, s0),
                t1: time_at(a, b, s1),
                speed,
            };
            match out.last_mut() {
                Some(cur) if piece.t0 - cur.end <= 1 => {
                    cur.end = cur.end.max(piece.t1);
                    cur.min_speed_mm_s = cur.min_speed_mm_s.min(speed);
                    cur.pieces.push(piece);
                }
                _ => out.push(ToleranceInterval {
                    start: piece.t0,
                    end: piece.t1,
                    min_speed_mm_s: speed,
                    pieces: vec![piece],
                }),
            }
        }
    }
    out
}

struct Candidate {
    t0: Timestamp,
    t1: Timestamp,
    dist: f64,
    speed: f64,
}

/// Instant of minimum distance inside an interval, restricted to pieces
/// accepted by `gate`. Plateaus of equal minimum distance (e.g. a dwell on
/// the target) resolve to their temporal midpoint.
fn closest_instant(
    gt: &Trajectory,
    geo: &Geometry,
    interval: &ToleranceInterval,
    gate: impl Fn(&Piece) -> bool,
) -> Option<(Timestamp, f64, f64)> {
    let samples = gt.samples();
    let cands: Vec<Candidate> = interval
        .pieces
        .iter()
        .filter(|p| gate(p))
        .map(|p| {
            let (a, b) = (&samples[p.seg], &samples[p.seg + 1]);
            let (qa, qb, qc) = geo.quadratic(a, b);
            let eval = |s: f64| (qa * s * s + qb * s + qc).max(0.0).sqrt();
            if qa == 0.0 {
                Candidate {
                    t0: p.t0,
                    t1: p.t1,
                    dist: eval(p.s0),
                    speed: p.speed,
                }
            } else {
                let s = (-qb / (2.0 * qa)).clamp(p.s0, p.s1);
                let t = time_at(a, b, s);
                Candidate {
                    t0: t,
                    t1: t,
                    dist: eval(s),
                    speed: p.speed,
                }
            }
        })
        .collect();
    let dmin = cands.iter().map(|c| c.dist).fold(f64::INFINITY, f64::min);
    if !dmin.is_finite() {
        return None;
    }
    let tied = |c: &Candidate| c.dist <= dmin + 1e-9;
    let first = cands.iter().position(tied)?;
    let run_len = cands[first..].iter().take_while(|c| tied(c)).count();
    let run = &cands[first..first + run_len];
    let (t0, t1) = (run[0].t0, run[run_len - 1].t1);
    let mid = t0 + (t1 - t0) / 2;
    let speed = run
        .iter()
        .find(|c| c.t0 <= mid && mid <= c.t1)
        .unwrap_or(&run[0])
        .speed;
    Some((mid, dmin, speed))
}

/// Visits of the ground truth to each evaluation pose, sorted by time.
///
/// Every maximal tolerance interval yields one visit at the instant of
/// minimum position distance. For `required_static` poses only instants on
/// segments with speed at or below the pose's threshold qualify; an interval
/// without such instants yields no visit.
pub fn find_visits(gt: &Trajectory, eval_poses: &[EvaluationPose]) -> Vec<Visit> {
    let mut visits = Vec::new();
    for ep in eval_poses {
        let geo = Geometry::new(gt, ep);
        let threshold = ep.static_speed_threshold_mm_s.unwrap_or(0.0);
        let mut index = 0;
        for interval in tolerance_intervals(gt, ep) {
            let found = if ep.required_static {
                closest_instant(gt, &geo, &interval, |p| p.speed <= threshold)
            } else {
                closest_instant(gt, &geo, &interval, |_| true)
            };
            let Some((t, dist, speed)) = found else {
                continue;
            };
            let pose = interpolate_pose(gt, t).expect("visit inside trajectory");
            visits.push(Visit {
                eval_pose_id: ep.id,
                visit_index: index,
                gt_time: t,
                gt_pose_at_visit: pose,
                gt_speed_mm_s: speed,
                distance_mm: dist,
            });
            index += 1;
        }
    }
    visits.sort_by_key(|v| (v.gt_time, v.eval_pose_id));
    visits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Source;

    fn polyline(points: &[(f64, f64)], speed: f64, rate: f64) -> Trajectory {
        // constant-speed traversal sampled at `rate`
        let mut cum = vec![0.0];
        for w in points.windows(2) {
            let d = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
            cum.push(cum.last().unwrap() + d);
        }
        let total = *cum.last().unwrap();
        let n = (total / speed * rate).ceil() as usize;
        let samples = (0..=n)
            .map(|k| {
                let s = (k as f64 / rate * speed).min(total);
                let i = cum.partition_point(|&c| c <= s).clamp(1, points.len() - 1);
                let f = (s - cum[i - 1]) / (cum[i] - cum[i - 1]);
                let (a, b) = (points[i - 1], points[i]);
                Pose::planar(
                    Timestamp::from_secs_f64(k as f64 / rate),
                    a.0 + f * (b.0 - a.0),
                    a.1 + f * (b.1 - a.1),
                )
            })
            .collect();
        Trajectory::new(Source::GroundTruth, samples).unwrap()
    }

    /// Brute-force 1 ms scan: number of maximal in-tolerance runs and the
    /// time of minimum distance inside each.
    fn scan(gt: &Trajectory, ep: &EvaluationPose) -> Vec<(f64, f64)> {
        let (t0, t1) = (gt.first_time().unwrap(), gt.last_time().unwrap());
        let mut runs = Vec::new();
        let mut cur: Option<(f64, f64)> = None;
        let mut t = t0;
        while t <= t1 {
            let p = interpolate_pose(gt, t).unwrap();
            let d = ((p.x - ep.x_mm).powi(2) + (p.y - ep.y_mm).powi(2)).sqrt();
            if d <= ep.position_tolerance_mm {
                let ts = t.as_secs_f64();
                cur = Some(match cur {
                    Some((bt, bd)) if bd <= d => (bt, bd),
                    _ => (ts, d),
                });
            } else if let Some(c) = cur.take() {
                runs.push(c);
            }
            t = t + 1_000_000;
        }
        runs.extend(cur);
        runs
    }

    #[test]
    fn exact_pass_gives_one_visit() {
        let gt = polyline(&[(0.0, 0.0), (2000.0, 0.0)], 1000.0, 100.0);
        let ep = EvaluationPose::at(7, 1000.0, 0.0, 100.0);
        let v = find_visits(&gt, &[ep]);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].eval_pose_id, 7);
        assert_eq!(v[0].visit_index, 0);
        assert!(v[0].distance_mm < 1e-9);
        assert!((v[0].gt_time.as_secs_f64() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn out_and_back_gives_two_visits_matching_scan() {
        // crosses the 100 mm disc around (1000, 30) on the way out and back
        let gt = polyline(
            &[(0.0, 0.0), (2000.0, 0.0), (2000.0, 60.0), (0.0, 60.0)],
            700.0,
            50.0,
        );
        let ep = EvaluationPose::at(1, 1000.0, 30.0, 100.0);
        let v = find_visits(&gt, std::slice::from_ref(&ep));
        let oracle = scan(&gt, &ep);
        assert_eq!(v.len(), 2);
        assert_eq!(oracle.len(), 2);
        assert_eq!(
            v.iter().map(|v| v.visit_index).collect::<Vec<_>>(),
            vec![0, 1]
        );
        for (visit, (t, _)) in v.iter().zip(&oracle) {
            assert!((visit.gt_time.as_secs_f64() - t).abs() <= 0.002);
        }
    }

    #[test]
    fn static_gate_never_satisfied() {
        let gt = polyline(&[(0.0, 0.0), (5000.0, 0.0)], 500.0, 100.0);
        let mut ep = EvaluationPose::at(1, 2500.0, 0.0, 100.0);
        ep.required_static = true;
        ep.static_speed_threshold_mm_s = Some(50.0);
        assert!(find_visits(&gt, &[ep.clone()]).is_empty());
        assert_eq!(tolerance_intervals(&gt, &ep).len(), 1);
    }

    #[test]
    fn dwell_resolves_to_plateau_midpoint() {
        let mut samples = Vec::new();
        let mut k = 0;
        let mut push = |x: f64| {
            samples.push(Pose::planar(Timestamp(k * 10_000_000), x, 0.0));
            k += 1;
        };
        for i in 0..100 {
            push(i as f64 * 10.0);
        }
        for _ in 0..200 {
            push(1000.0);
        }
        for i in 1..100 {
            push(1000.0 + i as f64 * 10.0);
        }
        let gt = Trajectory::new(Source::GroundTruth, samples).unwrap();
        let mut ep = EvaluationPose::at(3, 1000.0, 0.0, 100.0);
        ep.required_static = true;
        ep.static_speed_threshold_mm_s = Some(1.0);
        let v = find_visits(&gt, &[ep]);
        assert_eq!(v.len(), 1);
        // plateau from sample 100 (t=1.0 s) to sample 299 (t=2.99 s)
        assert!((v[0].gt_time.as_secs_f64() - 1.995).abs() < 1e-6);
        assert_eq!(v[0].gt_speed_mm_s, 0.0);
    }

    #[test]
    fn heading_gate_excludes_reverse_pass() {
        let gt = polyline(&[(0.0, 0.0), (2000.0, 0.0), (2000.0, 1.0), (0.0, 1.0)], 1000.0, 100.0);
        let samples: Vec<Pose> = gt
            .samples()
            .windows(2)
            .map(|w| {
                let yaw = (w[1].y - w[0].y).atan2(w[1].x - w[0].x).to_degrees();
                w[0].with_yaw(yaw)
            })
            .collect();
        let gt = Trajectory::new(Source::GroundTruth, samples).unwrap();
        let mut ep = EvaluationPose::at(1, 1000.0, 0.0, 50.0);
        assert_eq!(find_visits(&gt, &[ep.clone()]).len(), 2);
        ep.yaw_deg = Some(0.0);
        ep.heading_tolerance_deg = Some(20.0);
        let v = find_visits(&gt, &[ep]);
        assert_eq!(v.len(), 1);
        assert!(v[0].gt_time.as_secs_f64() < 2.0);
    }
}
