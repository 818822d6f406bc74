use super::TestbedError;
use crate::angle::wrap_360;
use crate::scenario::TestCase;
use crate::trajectory::{Pose, Source, Timestamp, Trajectory};

pub const MIN_GT_RATE_HZ: f64 = 50.0;
/// Braking and acceleration magnitude around static evaluation poses, mm/s².
pub const STOP_ACCELERATION_MM_S2: f64 = 1000.0;

#[derive(Debug, Clone, Copy)]
struct Phase {
    t0: f64,
    s0: f64,
    v0: f64,
    a: f64,
    dur: f64,
}

impl Phase {
    fn s_at(&self, t: f64) -> f64 {
        let tau = (t - self.t0).clamp(0.0, self.dur);
        self.s0 + self.v0 * tau + 0.5 * self.a * tau * tau
    }
}

struct Path {
    pts: Vec<(f64, f64, Option<f64>)>,
    cum: Vec<f64>,
}

impl Path {
    fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn segment(&self, s: f64) -> usize {
        self.cum.partition_point(|&c| c <= s).clamp(1, self.pts.len() - 1) - 1
    }

    fn at(&self, s: f64) -> (f64, f64, Option<f64>, f64) {
        let i = self.segment(s);
        let (a, b) = (self.pts[i], self.pts[i + 1]);
        let f = ((s - self.cum[i]) / (self.cum[i + 1] - self.cum[i])).clamp(0.0, 1.0);
        let z = a.2.zip(b.2).map(|(za, zb)| za + f * (zb - za));
        let yaw = wrap_360((b.1 - a.1).atan2(b.0 - a.0).to_degrees());
        (a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1), z, yaw)
    }

    /// Arc length of the first closest point to `(x, y)` and its distance.
    fn project(&self, x: f64, y: f64) -> (f64, f64) {
        let mut best = (0.0, f64::INFINITY);
        for i in 0..self.pts.len() - 1 {
            let (a, b) = (self.pts[i], self.pts[i + 1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let f = (((x - a.0) * dx + (y - a.1) * dy) / len2).clamp(0.0, 1.0);
            let d = (a.0 + f * dx - x).hypot(a.1 + f * dy - y);
            if d < best.1 {
                best = (self.cum[i] + f * len2.sqrt(), d);
            }
        }
        best
    }
}

fn build_path(tc: &TestCase) -> Result<Path, TestbedError> {
    let with_z = tc.waypoints.iter().all(|w| w.z_mm.is_some());
    let mut pts: Vec<(f64, f64, Option<f64>)> = Vec::new();
    for w in &tc.waypoints {
        let p = (w.x_mm, w.y_mm, if with_z { w.z_mm } else { None });
        let dup = pts
            .last()
            .is_some_and(|q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-9);
        if !dup {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(TestbedError::DegeneratePath);
    }
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1));
    }
    Ok(Path { pts, cum })
}

fn motion_profile(length: f64, stops: &[f64], v: f64, dwell: f64) -> Vec<Phase> {
    let acc = STOP_ACCELERATION_MM_S2;
    let mut phases = Vec::new();
    let mut t = 0.0;
    let mut push = |phases: &mut Vec<Phase>, s0: f64, v0: f64, a: f64, dur: f64| {
        if dur > 0.0 {
            phases.push(Phase { t0: t, s0, v0, a, dur });
            t += dur;
        }
    };
    let mut bounds = vec![0.0];
    bounds.extend(stops.iter().copied().filter(|s| *s > 0.0 && *s < length));
    bounds.push(length);
    let is_stop = |s: f64| stops.iter().any(|x| (x - s).abs() < 1e-9);

    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        if is_stop(a) {
            push(&mut phases, a, 0.0, 0.0, dwell);
        }
        let ramp_in = is_stop(a);
        let ramp_out = is_stop(b);
        let ramps = ramp_in as u8 + ramp_out as u8;
        let dist = b - a;
        let mut vp = v;
        if ramps > 0 && ramps as f64 * v * v / (2.0 * acc) > dist {
            vp = (2.0 * acc * dist / ramps as f64).sqrt();
        }
        let ramp_len = vp * vp / (2.0 * acc);
        let mut s = a;
        if ramp_in {
            push(&mut phases, s, 0.0, acc, vp / acc);
            s += ramp_len;
        }
        let cruise = dist - ramps as f64 * ramp_len;
        if cruise > 0.0 {
            push(&mut phases, s, vp, 0.0, cruise / vp);
            s += cruise;
        }
        if ramp_out {
            push(&mut phases, s, vp, -acc, vp / acc);
        }
    }
    if is_stop(length) {
        push(&mut phases, length, 0.0, 0.0, dwell);
    }
    phases
}

/// Noise-free ground truth for a test case.
///
/// The waypoint polyline is traversed at the nominal speed. Evaluation poses
/// with `required_static` get a braking ramp, a standstill of
/// `conditions.dwell_s` and an acceleration ramp. Heading follows the path
/// tangent; a vertical component is present only when every waypoint has one.
pub fn generate_gt(tc: &TestCase, gt_rate_hz: f64) -> Result<Trajectory, TestbedError> {
    if !(gt_rate_hz >= MIN_GT_RATE_HZ) || !gt_rate_hz.is_finite() {
        return Err(TestbedError::InvalidParameter(format!(
            "ground-truth rate must be at least {MIN_GT_RATE_HZ} Hz, got {gt_rate_hz}"
        )));
    }
    let v = tc.conditions.nominal_speed_mm_s;
    if !(v > 0.0) || !v.is_finite() {
        return Err(TestbedError::InvalidParameter(format!(
            "nominal speed must be positive, got {v}"
        )));
    }
    let path = build_path(tc)?;
    let length = path.length();

    let mut stops: Vec<f64> = tc
        .eval_poses
        .iter()
        .filter(|ep| ep.required_static)
        .filter_map(|ep| {
            let (s, d) = path.project(ep.x_mm, ep.y_mm);
            (d <= ep.position_tolerance_mm).then_some(s)
        })
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() < 1e-6);

    let phases = motion_profile(length, &stops, v, tc.conditions.dwell_s.max(0.0));
    let total = phases.last().map_or(0.0, |p| p.t0 + p.dur);
    let n = (total * gt_rate_hz).ceil() as i64;
    let mut samples = Vec::with_capacity(n as usize + 1);
    let mut idx = 0;
    for k in 0..=n {
        let t = k as f64 / gt_rate_hz;
        while idx + 1 < phases.len() && phases[idx + 1].t0 <= t {
            idx += 1;
        }
        let s = phases[idx].s_at(t).clamp(0.0, length);
        let (x, y, z, yaw) = path.at(s);
        let stamp = Timestamp::from_nanos((k as f64 * 1e9 / gt_rate_hz).round() as i64);
        let mut pose = Pose::planar(stamp, x, y).with_yaw(yaw);
        if let Some(z) = z {
            pose = pose.with_z(z);
        }
        samples.push(pose);
    }
    Ok(Trajectory::new(Source::GroundTruth, samples)?)
}
