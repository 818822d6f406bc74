use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{AlignMode, AlignmentError, RigidTransform};

/// Result of a least-squares rigid alignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    /// Maps LTS coordinates into the ground-truth frame.
    pub transform: RigidTransform,
    pub rms_residual_mm: f64,
    pub n_pairs: usize,
    pub per_pair_residuals_mm: Vec<f64>,
}

const RANK_TOL: f64 = 1e-9;

/// Closed-form rotation + translation minimising `Σ |R lts + t - gt|²`.
///
/// `pairs` are `(lts_position, gt_position)`. Planar mode ignores vertical
/// components and needs two distinct points; spatial mode needs three
/// non-collinear points.
pub fn align_rigid(
    pairs: &[(Vector3<f64>, Vector3<f64>)],
    mode: AlignMode,
) -> Result<AlignmentReport, AlignmentError> {
    let needed = match mode {
        AlignMode::Planar2D => 2,
        AlignMode::Spatial3D => 3,
    };
    if pairs.len() < needed {
        return Err(AlignmentError::TooFewPairs {
            needed,
            got: pairs.len(),
        });
    }
    let flatten = |v: &Vector3<f64>| match mode {
        AlignMode::Planar2D => Vector3::new(v.x, v.y, 0.0),
        AlignMode::Spatial3D => *v,
    };
    let n = pairs.len() as f64;
    let lts_mean = pairs.iter().map(|(l, _)| flatten(l)).sum::<Vector3<f64>>() / n;
    let gt_mean = pairs.iter().map(|(_, g)| flatten(g)).sum::<Vector3<f64>>() / n;
    let centered: Vec<_> = pairs
        .iter()
        .map(|(l, g)| (flatten(l) - lts_mean, flatten(g) - gt_mean))
        .collect();

    let transform = match mode {
        AlignMode::Planar2D => {
            let (mut dot, mut cross, mut scale) = (0.0, 0.0, 0.0);
            for (l, g) in &centered {
                dot += g.x * l.x + g.y * l.y;
                cross += g.y * l.x - g.x * l.y;
                scale += l.norm() * g.norm();
            }
            if !(scale > 0.0) || dot.hypot(cross) <= RANK_TOL * scale {
                return Err(AlignmentError::Degenerate(
                    "planar cross-covariance has rank 0 (points coincident)".into(),
                ));
            }
            let yaw = cross.atan2(dot).to_degrees();
            let rotated = RigidTransform::planar(yaw, 0.0, 0.0).apply_point(&lts_mean);
            let t = gt_mean - rotated;
            RigidTransform::planar(yaw, t.x, t.y)
        }
        AlignMode::Spatial3D => {
            let scatter: Matrix3<f64> = centered.iter().map(|(l, _)| l * l.transpose()).sum();
            let sv = scatter.symmetric_eigenvalues();
            let mut sv: Vec<f64> = sv.iter().copied().collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            if !(sv[0] > 0.0) {
                return Err(AlignmentError::Degenerate(
                    "LTS point scatter has rank 0 (points coincident)".into(),
                ));
            }
            if sv[1] <= RANK_TOL * sv[0] {
                return Err(AlignmentError::Degenerate(
                    "LTS point scatter has rank 1 (points collinear)".into(),
                ));
            }
            let h: Matrix3<f64> = centered.iter().map(|(l, g)| l * g.transpose()).sum();
            let svd = h.svd(true, true);
            let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
            let v = v_t.transpose();
            let d = (v * u.transpose()).determinant().signum();
            let r = v * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, d)) * u.transpose();
            RigidTransform::from_matrix(&r, gt_mean - r * lts_mean)
        }
    };

    let per_pair_residuals_mm: Vec<f64> = pairs
        .iter()
        .map(|(l, g)| (flatten(&transform.apply_point(&flatten(l))) - flatten(g)).norm())
        .collect();
    let rms_residual_mm =
        (per_pair_residuals_mm.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    Ok(AlignmentReport {
        transform,
        rms_residual_mm,
        n_pairs: pairs.len(),
        per_pair_residuals_mm,
    })
}
