//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use lts_eval::angle::wrap_180;
use lts_eval::metrics::{
    compute_stream_errors, estimate_latency, evaluate_performance, quantile, Distribution, Marker,
    PerformanceResults, Reported,
};
use lts_eval::requirements::{match_requirements, ApplicationProfile, EvaluationResults, RequirementStatus};
use lts_eval::scenario::{build_scenario, ScenarioKind, ScenarioParams, TestCase};
use lts_eval::testbed::{run_experiment, simulate_lts, ErrorModel};
use lts_eval::trajectory::{Pose, Source, Timestamp, Trajectory};
use lts_eval::RigidTransform;
use lts_eval_cli::io::{read_yaml, write_yaml};
use lts_eval_cli::pipeline::{RunManifest, SystemSpec};

// Tolerances.
const LATENCY_TOL_MS: f64 = 7.5;
const ALIGN_YAW_TOL_DEG: f64 = 0.1;
const ALIGN_TRANSLATION_TOL_MM: f64 = 2.0;
const ALIGN_RMS_MAX_MM: f64 = 2.5;
const RAYLEIGH_REL_TOL: f64 = 0.03;
const ZERO_LATENCY_TOL_MS: f64 = 1.0;
const ZERO_RATE_REL_TOL: f64 = 0.005;
const ZERO_DRIFT_TOL_MM_S: f64 = 1e-6;
const BIAS_SIGMAS: f64 = 3.0;
const REPEATABILITY_REL_TOL: f64 = 0.05;
const OFFSET_TOL_MS: f64 = 2.0;
const CORRECTED_LATENCY_TOL_MS: f64 = 5.0;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lts-eval"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/warehouse")
}

fn value(r: &Reported<Distribution>) -> Result<&Distribution, String> {
    r.value().ok_or_else(|| format!("missing distribution: {:?}", r.marker()))
}

// 1. Application suitability matrix through the `match` command.
fn warehouse() -> Check {
    type Row = (&'static str, &'static [&'static str], &'static [&'static str]);
    let expected: [(&str, &str, [Row; 5], &[&str]); 3] = [
        (
            "goods_tracking",
            "Goods Tracking",
            [
                ("horizontal_accuracy", &["Q95 < 1000 mm"], &["U", "R", "C"]),
                ("vertical_accuracy", &[], &["U", "R", "C"]),
                ("orientation_accuracy", &[], &["U", "R", "C"]),
                ("latency", &["< 10000 ms"], &["U", "R", "C"]),
                ("update_rate", &["> 0.1 Hz"], &["U", "R", "C"]),
            ],
            &["U", "R", "C"],
        ),
        (
            "automated_pallet_booking",
            "Automated Pallet Booking",
            [
                ("horizontal_accuracy", &["Q99.9 < 200 mm"], &["R", "C"]),
                ("vertical_accuracy", &["Q99.9 < 500 mm"], &[]),
                ("orientation_accuracy", &["Q99.9 < 30°"], &["R", "C"]),
                ("latency", &["< 1000 ms"], &["U", "R", "C"]),
                ("update_rate", &["> 1 Hz"], &["U", "R", "C"]),
            ],
            &[],
        ),
        (
            "autonomous_forklift_navigation",
            "Autonomous Forklift Navigation",
            [
                ("horizontal_accuracy", &["Q99.99 < 50 mm"], &["R"]),
                ("vertical_accuracy", &[], &["U", "R", "C"]),
                ("orientation_accuracy", &["Q99.99 < 4°"], &["R", "C"]),
                ("latency", &["< 100 ms"], &["U", "R", "C"]),
                ("update_rate", &["> 20 Hz"], &["R", "C"]),
            ],
            &["R"],
        ),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let results: Vec<PathBuf> = ["U", "R", "C"].iter().map(|n| fixtures().join(format!("results/{n}.yaml"))).collect();
    let mut cells = 0;
    for (file, name, rows, overall) in expected {
        let out = dir.path().join(format!("{file}.yaml"));
        let status = bin()
            .arg("match")
            .arg("--profile")
            .arg(fixtures().join(format!("profiles/{file}.yaml")))
            .arg("--results")
            .args(&results)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("match {file} failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
        let eval: EvaluationResults = read_yaml(&out).map_err(|e| e.to_string())?;
        if eval.profile != name {
            return Err(format!("profile name {} != {name}", eval.profile));
        }
        for (row, (metric, reqs, suitable)) in eval.criteria.iter().zip(rows) {
            cells += 2;
            if row.metric_id.name() != metric || row.requirements != reqs || row.suitable != suitable {
                return Err(format!("{name}/{metric}: got {:?} {:?}, want {reqs:?} {suitable:?}", row.requirements, row.suitable));
            }
        }
        cells += 1;
        if eval.overall_suitable != overall {
            return Err(format!("{name} overall: got {:?}, want {overall:?}", eval.overall_suitable));
        }
    }
    Ok(format!("{cells} cells match"))
}

// 2. Latency recovery on the Latency scenario.
fn latency() -> Check {
    let tc = build_scenario(ScenarioKind::Latency, &ScenarioParams::default()).map_err(|e| e.to_string())?;
    let speed = tc.conditions.nominal_speed_mm_s;
    if speed != 2000.0 {
        return Err(format!("latency scenario speed {speed} mm/s"));
    }
    let em = ErrorModel {
        latency_s: 0.150,
        noise_sigma_mm: [5.0, 5.0, 0.0],
        seed: 11,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).map_err(|e| e.to_string())?;
    let ms = estimate_latency(&data.gt, &data.lts, 100.0).map_err(|e| e.to_string())?;
    ensure((ms - 150.0).abs() <= LATENCY_TOL_MS, format!("estimated {ms:.2} ms (injected 150 ms)"))
}

// 3. Rigid alignment under a planar frame error.
fn alignment() -> Check {
    let tc = build_scenario(ScenarioKind::CoordinateAlignment, &ScenarioParams { seed: 5, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let frame = RigidTransform::planar(30.0, 500.0, 200.0);
    let em = ErrorModel {
        frame_error: frame,
        noise_sigma_mm: [1.0, 1.0, 0.0],
        seed: 12,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).map_err(|e| e.to_string())?;
    let r = evaluate_performance(&data, &tc, &[0.95]).map_err(|e| e.to_string())?;
    let a = r.alignment.ok_or("no alignment report")?;
    if a.n_pairs != 63 {
        return Err(format!("{} pairs, want 63", a.n_pairs));
    }
    // The fit maps LTS into GT; its inverse is the injected error.
    let got = a.transform.inverse();
    let dyaw = wrap_180(got.yaw_deg() - 30.0).abs();
    let t = got.translation();
    let dt = (t - frame.translation()).norm();
    ensure(
        dyaw <= ALIGN_YAW_TOL_DEG && dt <= ALIGN_TRANSLATION_TOL_MM && a.rms_residual_mm <= ALIGN_RMS_MAX_MM,
        format!(
            "yaw {:.4}° (err {dyaw:.4}), t ({:.2}, {:.2}) mm (err {dt:.3}), rms {:.3} mm over {} pairs",
            got.yaw_deg(),
            t.x,
            t.y,
            a.rms_residual_mm,
            a.n_pairs
        ),
    )
}

// 4. Horizontal error of isotropic planar noise follows a Rayleigh law.
fn rayleigh() -> Check {
    let samples = (0..=12_000)
        .map(|k| Pose::planar(Timestamp(k * 10_000_000), k as f64 * 14.0, 0.0).with_yaw(0.0))
        .collect();
    let gt = Trajectory::new(Source::GroundTruth, samples).map_err(|e| e.to_string())?;
    let em = ErrorModel {
        noise_sigma_mm: [10.0, 10.0, 0.0],
        seed: 13,
        ..ErrorModel::ideal(100.0)
    };
    let lts = simulate_lts(&gt, &em).map_err(|e| e.to_string())?;
    let h: Vec<f64> = compute_stream_errors(&gt, &lts).iter().map(|e| e.horizontal_mm).collect();
    if h.len() < 10_000 {
        return Err(format!("only {} samples", h.len()));
    }
    let d = Distribution::from_samples(&h, &[0.95]).ok_or("no samples")?;
    let q95 = *d.quantile(0.95).and_then(Reported::value).ok_or("no Q95")?;
    let mean_ref = 10.0 * (std::f64::consts::PI / 2.0).sqrt();
    let q95_ref = 10.0 * (2.0 * 20f64.ln()).sqrt();
    let (em_, eq) = ((d.mean - mean_ref).abs() / mean_ref, (q95 - q95_ref).abs() / q95_ref);
    ensure(
        em_ <= RAYLEIGH_REL_TOL && eq <= RAYLEIGH_REL_TOL,
        format!(
            "n {}, mean {:.3} vs {mean_ref:.3} ({:.2}%), Q95 {q95:.3} vs {q95_ref:.3} ({:.2}%)",
            h.len(),
            d.mean,
            100.0 * em_,
            100.0 * eq
        ),
    )
}

fn write_run(dir: &Path, tc: &TestCase, em: &ErrorModel, seed: Option<u64>, profiles: bool) -> Result<PathBuf, String> {
    let err = |e: anyhow::Error| e.to_string();
    write_yaml(&dir.join("testcase.yaml"), tc).map_err(err)?;
    write_yaml(&dir.join("em.yaml"), em).map_err(err)?;
    let mut profile_paths = Vec::new();
    if profiles {
        for p in ["goods_tracking", "autonomous_forklift_navigation"] {
            let src = fixtures().join(format!("profiles/{p}.yaml"));
            fs::copy(&src, dir.join(format!("{p}.yaml"))).map_err(|e| e.to_string())?;
            profile_paths.push(PathBuf::from(format!("{p}.yaml")));
        }
    }
    let m = RunManifest {
        testcase: "testcase.yaml".into(),
        out: "out".into(),
        seed,
        quantiles: vec![0.5, 0.95, 0.999],
        latency_speed_threshold_mm_s: None,
        static_speed_threshold_mm_s: None,
        gt_rate_hz: None,
        systems: vec![
            SystemSpec { name: "sim_a".into(), error_model: Some("em.yaml".into()), gt_csv: None, lts_csv: None },
            SystemSpec { name: "sim_b".into(), error_model: Some("em.yaml".into()), gt_csv: None, lts_csv: None },
        ],
        profiles: profile_paths,
    };
    let path = dir.join("run.yaml");
    write_yaml(&path, &m).map_err(err)?;
    Ok(path)
}

fn pipeline(manifest: &Path) -> Result<(), String> {
    let o = bin().arg("pipeline").arg("--manifest").arg(manifest).output().map_err(|e| e.to_string())?;
    match o.status.code() {
        Some(0) => Ok(()),
        c => Err(format!("pipeline exit {c:?}: {}", String::from_utf8_lossy(&o.stderr))),
    }
}

// 5. All-zero error model through the full pipeline.
fn zero_model() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let tc = build_scenario(ScenarioKind::StandardDynamic, &ScenarioParams::default()).map_err(|e| e.to_string())?;
    let manifest = write_run(dir.path(), &tc, &ErrorModel::ideal(20.0), None, false)?;
    pipeline(&manifest)?;
    let r: PerformanceResults = read_yaml(&dir.path().join("out/sim_a/results.yaml")).map_err(|e| e.to_string())?;
    for (name, d) in [
        ("horizontal", &r.absolute_horizontal_error_mm),
        ("orientation", &r.absolute_orientation_error_deg),
        ("x", &r.position_error_x_mm),
        ("y", &r.position_error_y_mm),
        ("signed orientation", &r.orientation_error_deg),
    ] {
        let d = value(d)?;
        let qs = d.quantiles.iter().filter_map(|q| q.value.value().copied());
        if d.mean != 0.0 || d.std != 0.0 || qs.into_iter().any(|v| v != 0.0) {
            return Err(format!("{name} error not zero: {d:?}"));
        }
    }
    if r.sample_count != 63 {
        return Err(format!("{} matched visits", r.sample_count));
    }
    let lat = *r.latency_ms.value().ok_or("latency missing")?;
    let rate = r.update_rate_hz.value().ok_or("rate missing")?.rate_hz;
    let slope = r.drift.value().ok_or("drift missing")?.slope_mm_per_s;
    ensure(
        lat.abs() <= ZERO_LATENCY_TOL_MS
            && (rate - 20.0).abs() / 20.0 <= ZERO_RATE_REL_TOL
            && slope.abs() <= ZERO_DRIFT_TOL_MM_S,
        format!("errors 0 over {} visits, latency {lat:.3} ms, rate {rate:.4} Hz, drift {slope:e} mm/s", r.sample_count),
    )
}

fn repeat_case(seed: u64) -> Result<TestCase, String> {
    let p = ScenarioParams {
        n_eval_poses: 100,
        min_repeat_visits: 10,
        seed,
        ..Default::default()
    };
    build_scenario(ScenarioKind::Repeatability, &p).map_err(|e| e.to_string())
}

// 6. Bias recovery with a noisy, biased system.
fn bias() -> Check {
    let tc = repeat_case(6)?;
    let (bias, sigma) = ([91.8, -21.1], [106.8, 160.4]);
    let em = ErrorModel {
        bias_mm: [bias[0], bias[1], 0.0],
        noise_sigma_mm: [sigma[0], sigma[1], 0.0],
        seed: 16,
        ..ErrorModel::ideal(8.2)
    };
    let data = run_experiment(&tc, &em).map_err(|e| e.to_string())?;
    let r = evaluate_performance(&data, &tc, &[0.95]).map_err(|e| e.to_string())?;
    let n = r.sample_count as f64;
    if r.sample_count < 1000 {
        return Err(format!("{} matched samples", r.sample_count));
    }
    let mx = value(&r.position_error_x_mm)?.mean;
    let my = value(&r.position_error_y_mm)?.mean;
    let (tx, ty) = (BIAS_SIGMAS * sigma[0] / n.sqrt(), BIAS_SIGMAS * sigma[1] / n.sqrt());
    ensure(
        (mx - bias[0]).abs() <= tx && (my - bias[1]).abs() <= ty,
        format!("n {n}, mean x {mx:.2} (±{tx:.2}), mean y {my:.2} (±{ty:.2})"),
    )
}

// 7. Q99.99 needs 10⁴ samples; a must requirement on it then fails.
fn quantile_gate() -> Check {
    let below: Vec<f64> = (0..9_999).map(f64::from).collect();
    let at: Vec<f64> = (0..10_000).map(f64::from).collect();
    let q = |v: &[f64]| quantile(v, 0.9999).map_err(|e| e.to_string());
    if q(&below)? != Reported::Missing(Marker::InsufficientSamples) || q(&at)?.value().is_none() {
        return Err("gate boundary not at 10^4 samples".into());
    }
    let tc = build_scenario(ScenarioKind::StandardDynamic, &ScenarioParams::default()).map_err(|e| e.to_string())?;
    let data = run_experiment(&tc, &ErrorModel::ideal(20.0)).map_err(|e| e.to_string())?;
    let r = evaluate_performance(&data, &tc, &[0.9999]).map_err(|e| e.to_string())?;
    let got = value(&r.absolute_horizontal_error_mm)?.quantile(0.9999).cloned();
    if got != Some(Reported::Missing(Marker::InsufficientSamples)) {
        return Err(format!("Q99.99 over {} samples gave {got:?}", r.sample_count));
    }
    let profile: ApplicationProfile = serde_yaml::from_str(
        "name: gate\nrequirements:\n- {metric_id: horizontal_accuracy, quantile: 0.9999, \
         threshold: {value: 1000000, unit: mm}, direction: max, obligation: must}\n",
    )
    .map_err(|e| e.to_string())?;
    let eval = match_requirements(&profile, &[("zero".into(), r.clone())]).map_err(|e| e.to_string())?;
    let status = eval.lts[0].outcomes[0].status;
    ensure(
        status == RequirementStatus::InsufficientSamples && !eval.lts[0].suitable && eval.overall_suitable.is_empty(),
        format!("{} samples -> insufficient_samples, status {status:?}, unsuitable", r.sample_count),
    )
}

fn tree(root: &Path) -> Result<BTreeMap<PathBuf, Vec<u8>>, String> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) -> std::io::Result<()> {
        for e in fs::read_dir(dir)? {
            let p = e?.path();
            if p.is_dir() {
                walk(root, &p, out)?;
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p)?);
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out).map_err(|e| e.to_string())?;
    Ok(out)
}

// 8. Identical manifests give byte-identical output trees.
fn determinism() -> Check {
    let tc = build_scenario(ScenarioKind::StandardDynamic, &ScenarioParams { seed: 8, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let em = ErrorModel {
        noise_sigma_mm: [30.0, 30.0, 0.0],
        latency_s: 0.05,
        dropout_prob: 0.1,
        heading_noise_sigma_deg: 1.0,
        ..ErrorModel::ideal(20.0)
    };
    let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    let ma = write_run(a.path(), &tc, &em, Some(42), true)?;
    let mb = write_run(b.path(), &tc, &em, Some(42), true)?;
    if fs::read(&ma).ok() != fs::read(&mb).ok() {
        return Err("manifests differ".into());
    }
    pipeline(&ma)?;
    pipeline(&mb)?;
    let (ta, tb) = (tree(&a.path().join("out"))?, tree(&b.path().join("out"))?);
    if ta.len() < 10 {
        return Err(format!("only {} files written", ta.len()));
    }
    if let Some((p, _)) = ta.iter().find(|(p, bytes)| tb.get(*p) != Some(bytes)) {
        return Err(format!("{} differs", p.display()));
    }
    ensure(ta.len() == tb.len(), format!("{} files byte-identical", ta.len()))
}

// 9. Pooled repeat-visit spread of isotropic noise.
fn repeatability() -> Check {
    let tc = repeat_case(9)?;
    let em = ErrorModel {
        noise_sigma_mm: [10.0, 10.0, 0.0],
        seed: 19,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).map_err(|e| e.to_string())?;
    let r = evaluate_performance(&data, &tc, &[0.95]).map_err(|e| e.to_string())?;
    let rep = &r.repeatability_mm;
    let min_visits = rep.per_pose.iter().map(|p| p.visits).min().unwrap_or(0);
    if min_visits < 3 || !rep.excluded_poses.is_empty() {
        return Err(format!("min visits {min_visits}, excluded {:?}", rep.excluded_poses));
    }
    let got = *rep.aggregate_mm.value().ok_or("aggregate missing")?;
    let want = 10.0 * 2f64.sqrt();
    let rel = (got - want).abs() / want;
    ensure(
        rel <= REPEATABILITY_REL_TOL,
        format!("{got:.3} mm vs {want:.3} mm ({:.2}%), {} poses, ≥{min_visits} visits", 100.0 * rel, rep.per_pose.len()),
    )
}

// 10. Clock offset recovered, then latency measured on corrected stamps.
fn clock_offset() -> Check {
    let tc = build_scenario(ScenarioKind::StandardDynamic, &ScenarioParams { seed: 10, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let em = ErrorModel {
        clock_offset_s: 0.2,
        noise_sigma_mm: [2.0, 2.0, 0.0],
        seed: 20,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).map_err(|e| e.to_string())?;
    let r = evaluate_performance(&data, &tc, &[0.95]).map_err(|e| e.to_string())?;
    let off = r.clock_offset_ms.value().ok_or("clock offset missing")?.offset_ms;
    let corrected = data.lts.shifted(-(off * 1e6).round() as i64);
    let lat = estimate_latency(&data.gt, &corrected, 100.0).map_err(|e| e.to_string())?;
    ensure(
        (off - 200.0).abs() <= OFFSET_TOL_MS && lat.abs() <= CORRECTED_LATENCY_TOL_MS,
        format!("offset {off:.3} ms (injected 200), corrected latency {lat:.3} ms"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("application matrix", warehouse, Duration::from_secs(1)),
        ("latency recovery", latency, Duration::from_secs(10)),
        ("alignment recovery", alignment, Duration::from_secs(1)),
        ("rayleigh noise statistics", rayleigh, Duration::from_secs(30)),
        ("zero-model pipeline", zero_model, Duration::from_secs(10)),
        ("bias recovery", bias, Duration::from_secs(30)),
        ("quantile gate", quantile_gate, Duration::from_secs(1)),
        ("determinism", determinism, Duration::from_secs(20)),
        ("repeatability oracle", repeatability, Duration::from_secs(30)),
        ("clock offset separability", clock_offset, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        failed += usize::from(tag == "FAIL");
        let over = if took > budget { format!(" [over {:.0} s budget]", budget.as_secs_f64()) } else { String::new() };
        println!("{tag} {:>2} {name}: {msg} ({:.2} s){over}", i + 1, took.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
