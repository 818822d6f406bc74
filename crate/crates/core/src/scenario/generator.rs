use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::testcase::{Area, Conditions, ScenarioKind, TestCase, Waypoint};
use super::ScenarioError;
use crate::angle::wrap_360;
use crate::trajectory::EvaluationPose;

/// Distance between the sweep and the area boundary, mm.
const PATH_INSET_MM: f64 = 200.0;
const MAX_ARC_RADIUS_MM: f64 = 1000.0;
const ARC_STEP_DEG: f64 = 5.0;
const JITTER_FRACTION: f64 = 0.2;
const END_INSET_MM: f64 = 500.0;
const LATENCY_MIN_SPEED_MM_S: f64 = 2000.0;
const LATENCY_MAX_LANES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioParams {
    pub area: Area,
    pub n_eval_poses: usize,
    pub nominal_speed_mm_s: f64,
    pub seed: u64,
    pub position_tolerance_mm: f64,
    pub static_speed_threshold_mm_s: f64,
    pub min_repeat_visits: u32,
    pub max_match_gap_s: f64,
    pub dwell_s: f64,
    pub gt_accuracy_mm: f64,
    pub expected_lts_accuracy_mm: Option<f64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            area: Area {
                width_m: 10.0,
                depth_m: 10.0,
            },
            n_eval_poses: 63,
            nominal_speed_mm_s: super::DEFAULT_NOMINAL_SPEED_MM_S,
            seed: 0,
            position_tolerance_mm: 100.0,
            static_speed_threshold_mm_s: 50.0,
            min_repeat_visits: 3,
            max_match_gap_s: 0.25,
            dwell_s: super::DEFAULT_DWELL_S,
            gt_accuracy_mm: 1.0,
            expected_lts_accuracy_mm: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PathPoint {
    x: f64,
    y: f64,
}

/// Serpentine sweep: horizontal lanes joined by quarter arcs and a vertical
/// connector at alternating ends.
struct Sweep {
    lanes_y: Vec<f64>,
    xl: f64,
    xr: f64,
    rc: f64,
}

impl Sweep {
    fn polyline(&self) -> Vec<PathPoint> {
        let mut pts = vec![PathPoint {
            x: self.xl,
            y: self.lanes_y[0],
        }];
        for (j, pair) in self.lanes_y.windows(2).enumerate() {
            let (y0, y1) = (pair[0], pair[1]);
            if j % 2 == 0 {
                push(&mut pts, self.xr, y0);
                arc(&mut pts, self.xr, y0 + self.rc, self.rc, -90.0, 0.0);
                push(&mut pts, self.xr + self.rc, y1 - self.rc);
                arc(&mut pts, self.xr, y1 - self.rc, self.rc, 0.0, 90.0);
            } else {
                push(&mut pts, self.xl, y0);
                arc(&mut pts, self.xl, y0 + self.rc, self.rc, -90.0, -180.0);
                push(&mut pts, self.xl - self.rc, y1 - self.rc);
                arc(&mut pts, self.xl, y1 - self.rc, self.rc, 180.0, 90.0);
            }
        }
        let end_x = if self.lanes_y.len() % 2 == 1 {
            self.xr
        } else {
            self.xl
        };
        push(&mut pts, end_x, *self.lanes_y.last().unwrap());
        pts
    }
}

fn push(pts: &mut Vec<PathPoint>, x: f64, y: f64) {
    let last = pts.last().unwrap();
    if (last.x - x).hypot(last.y - y) > 1e-9 {
        pts.push(PathPoint { x, y });
    }
}

fn arc(pts: &mut Vec<PathPoint>, cx: f64, cy: f64, r: f64, from_deg: f64, to_deg: f64) {
    let steps = ((to_deg - from_deg).abs() / ARC_STEP_DEG).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let a = (from_deg + (to_deg - from_deg) * k as f64 / steps as f64).to_radians();
        push(pts, cx + r * a.cos(), cy + r * a.sin());
    }
}

fn lane_positions(y0: f64, y1: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| y0 + (y1 - y0) * j as f64 / (n - 1) as f64)
        .collect()
}

fn heading(a: PathPoint, b: PathPoint) -> f64 {
    wrap_360((b.y - a.y).atan2(b.x - a.x).to_degrees())
}

fn cumulative(pts: &[PathPoint]) -> Vec<f64> {
    let mut acc = vec![0.0];
    for w in pts.windows(2) {
        let last = *acc.last().unwrap();
        acc.push(last + (w[1].x - w[0].x).hypot(w[1].y - w[0].y));
    }
    acc
}

fn point_at(pts: &[PathPoint], cum: &[f64], s: f64) -> (f64, f64, f64) {
    let i = cum.partition_point(|&c| c <= s).clamp(1, pts.len() - 1) - 1;
    let seg = cum[i + 1] - cum[i];
    let f = ((s - cum[i]) / seg).clamp(0.0, 1.0);
    let (a, b) = (pts[i], pts[i + 1]);
    (a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), heading(a, b))
}

fn waypoints(pts: &[PathPoint]) -> Vec<Waypoint> {
    (0..pts.len())
        .map(|i| {
            let yaw = if i + 1 < pts.len() {
                heading(pts[i], pts[i + 1])
            } else {
                heading(pts[i - 1], pts[i])
            };
            Waypoint {
                yaw_deg: Some(yaw),
                ..Waypoint::xy(pts[i].x, pts[i].y)
            }
        })
        .collect()
}

fn param(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Parameter(msg.into())
}

/// Builds one of the standard scenario kinds on a serpentine sweep of the
/// area. Identical parameters give identical test cases.
pub fn build_scenario(kind: ScenarioKind, p: &ScenarioParams) -> Result<TestCase, ScenarioError> {
    if kind == ScenarioKind::Custom {
        return Err(param("custom test cases are authored by hand, not generated"));
    }
    if p.n_eval_poses < 2 {
        return Err(param(format!("need at least 2 evaluation poses, got {}", p.n_eval_poses)));
    }
    let (w, d) = (p.area.width_m * 1000.0, p.area.depth_m * 1000.0);
    if !(p.area.width_m > 0.0 && p.area.depth_m > 0.0) || p.area.square_metres() < 4.0 {
        return Err(param(format!(
            "area must be at least 4 m², got {} m²",
            p.area.square_metres()
        )));
    }
    if !(p.nominal_speed_mm_s > 0.0) {
        return Err(param("nominal speed must be positive"));
    }
    if !(p.position_tolerance_mm > 0.0) {
        return Err(param("position tolerance must be positive"));
    }
    if kind.requires_static() && !(p.static_speed_threshold_mm_s > 0.0) {
        return Err(param(format!("{kind} needs a positive static speed threshold")));
    }
    if kind == ScenarioKind::Repeatability && p.min_repeat_visits < 2 {
        return Err(param("repeatability needs min_repeat_visits of at least 2"));
    }

    let r = MAX_ARC_RADIUS_MM.min(w / 6.0);
    let (y0, y1) = (PATH_INSET_MM, d - PATH_INSET_MM);
    let usable_depth = y1 - y0;
    if !(usable_depth > 0.0) {
        return Err(param(format!("area depth {} m too small for a sweep", p.area.depth_m)));
    }
    let tol = p.position_tolerance_mm;
    let n = p.n_eval_poses;

    let grid_cols = (kind == ScenarioKind::CoordinateAlignment).then(|| {
        let usable_width = w - 2.0 * PATH_INSET_MM;
        let rows = ((n as f64 * usable_depth / usable_width).sqrt().round() as usize).clamp(2, n);
        (rows, n.div_ceil(rows))
    });
    let n_lanes = match (kind, grid_cols) {
        (_, Some((rows, _))) => rows,
        (ScenarioKind::Latency, _) => {
            ((usable_depth / (2.0 * r)).floor() as usize + 1).clamp(2, LATENCY_MAX_LANES)
        }
        _ => (usable_depth / (2.0 * r)).floor() as usize + 1,
    }
    .max(2);
    let lanes_y = lane_positions(y0, y1, n_lanes);
    let rc = r.min(0.5 * (lanes_y[1] - lanes_y[0]));
    let (xl, xr) = (PATH_INSET_MM + rc, w - PATH_INSET_MM - rc);
    if !(xr > xl) {
        return Err(param(format!("area width {} m too small for a sweep", p.area.width_m)));
    }
    if lanes_y[1] - lanes_y[0] < 2.0 * tol {
        return Err(param("lanes closer than two position tolerances"));
    }
    let sweep = Sweep {
        lanes_y,
        xl,
        xr,
        rc,
    };
    let pts = sweep.polyline();
    let cum = cumulative(&pts);
    let length = *cum.last().unwrap();

    let required_static = kind.requires_static();
    let threshold = required_static.then_some(p.static_speed_threshold_mm_s);
    let make_pose = |id: u32, x: f64, y: f64, yaw: f64| EvaluationPose {
        yaw_deg: Some(yaw),
        required_static,
        static_speed_threshold_mm_s: threshold,
        ..EvaluationPose::at(id, x, y, tol)
    };

    let eval_poses: Vec<EvaluationPose> = match grid_cols {
        Some((_, cols)) => {
            if cols > 1 && (xr - xl) / (cols - 1) as f64 <= 2.0 * tol {
                return Err(param("grid columns closer than two position tolerances"));
            }
            let mut out = Vec::with_capacity(n);
            'rows: for (j, &y) in sweep.lanes_y.iter().enumerate() {
                for i in 0..cols {
                    if out.len() == n {
                        break 'rows;
                    }
                    let f = if cols == 1 { 0.5 } else { i as f64 / (cols - 1) as f64 };
                    let (x, yaw) = if j % 2 == 0 {
                        (xl + f * (xr - xl), 0.0)
                    } else {
                        (xr - f * (xr - xl), 180.0)
                    };
                    out.push(make_pose(out.len() as u32 + 1, x, y, yaw));
                }
            }
            out
        }
        None => {
            let end = END_INSET_MM.min(0.1 * length);
            let spacing = (length - 2.0 * end) / n as f64;
            if (1.0 - 2.0 * JITTER_FRACTION) * spacing <= 2.0 * tol {
                return Err(param(format!(
                    "{n} evaluation poses do not fit on a {:.1} m path with {tol} mm tolerance",
                    length / 1000.0
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            (0..n)
                .map(|i| {
                    let jitter = rng.random_range(-JITTER_FRACTION..=JITTER_FRACTION);
                    let s = end + spacing * (i as f64 + 0.5 + jitter);
                    let (x, y, yaw) = point_at(&pts, &cum, s);
                    make_pose(i as u32 + 1, x, y, yaw)
                })
                .collect()
        }
    };

    let passes = if kind == ScenarioKind::Repeatability {
        p.min_repeat_visits as usize
    } else {
        1
    };
    let forward = waypoints(&pts);
    let backward = {
        let rev: Vec<PathPoint> = pts.iter().rev().copied().collect();
        waypoints(&rev)
    };
    let mut path = forward.clone();
    for k in 1..passes {
        let next = if k % 2 == 1 { &backward } else { &forward };
        path.extend_from_slice(&next[1..]);
    }

    let nominal_speed_mm_s = if kind == ScenarioKind::Latency {
        p.nominal_speed_mm_s.max(LATENCY_MIN_SPEED_MM_S)
    } else {
        p.nominal_speed_mm_s
    };
    let conditions = Conditions {
        static_speed_threshold_mm_s: threshold,
        max_match_gap_s: p.max_match_gap_s,
        min_repeat_visits: (kind == ScenarioKind::Repeatability).then_some(p.min_repeat_visits),
        nominal_speed_mm_s,
        dwell_s: p.dwell_s,
        expected_lts_accuracy_mm: p.expected_lts_accuracy_mm,
    };
    let reporting = BTreeMap::from([
        ("generator".to_string(), "serpentine_sweep".to_string()),
        ("seed".to_string(), p.seed.to_string()),
        ("lanes".to_string(), sweep.lanes_y.len().to_string()),
        ("path_length_mm".to_string(), format!("{length:.1}")),
        ("passes".to_string(), passes.to_string()),
    ]);

    Ok(TestCase {
        id: format!(
            "{kind}-{}x{}m-{n}p-seed{}",
            p.area.width_m, p.area.depth_m, p.seed
        ),
        scenario_kind: kind,
        area: p.area,
        waypoints: path,
        eval_poses,
        conditions,
        reporting,
        gt_accuracy_mm: p.gt_accuracy_mm,
    })
}
