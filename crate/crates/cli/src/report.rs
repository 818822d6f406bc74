//! Plot-data export: error scatter against heading and error over time
//! against ground-truth speed.

use std::path::Path;

use anyhow::{bail, Result};
use serde::Serialize;

use lts_eval::metrics::PerformanceResults;

use crate::io::write_atomic;

pub const SCATTER_FILE: &str = "error_scatter.csv";
pub const OVER_TIME_FILE: &str = "error_over_time.csv";

#[derive(Serialize)]
struct ScatterRow {
    ex_mm: f64,
    ey_mm: f64,
    gt_yaw_deg: Option<f64>,
}

#[derive(Serialize)]
struct OverTimeRow {
    t_s: f64,
    horizontal_error_mm: f64,
    gt_speed_mm_s: f64,
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>, header: &[&str]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Writes both plot files into `dir`. Fails when the results carry no
/// per-visit error samples.
pub fn write_plot_data(results: &PerformanceResults, dir: &Path) -> Result<()> {
    let s = &results.error_samples;
    if s.is_empty() {
        bail!("results for `{}` contain no error samples", results.test_case_id);
    }
    let scatter = to_csv(
        s.iter().map(|e| ScatterRow { ex_mm: e.ex_mm, ey_mm: e.ey_mm, gt_yaw_deg: e.gt_yaw_deg }),
        &["ex_mm", "ey_mm", "gt_yaw_deg"],
    )?;
    let over_time = to_csv(
        s.iter().map(|e| OverTimeRow {
            t_s: e.t_s,
            horizontal_error_mm: e.horizontal_mm,
            gt_speed_mm_s: e.gt_speed_mm_s,
        }),
        &["t_s", "horizontal_error_mm", "gt_speed_mm_s"],
    )?;
    write_atomic(&dir.join(SCATTER_FILE), &scatter)?;
    write_atomic(&dir.join(OVER_TIME_FILE), &over_time)
}
