use lts_eval::metrics::{compute_stream_errors, compute_update_rate, evaluate_performance, estimate_latency};
use lts_eval::scenario::{build_scenario, Area, ScenarioKind, ScenarioParams};
use lts_eval::testbed::{run_experiment, simulate_lts, ErrorModel};
use lts_eval::trajectory::{Pose, Source, Timestamp, Trajectory};
use lts_eval::RigidTransform;

fn straight(duration_s: f64) -> Trajectory {
    let n = (duration_s * 100.0).round() as i64;
    let samples = (0..=n)
        .map(|k| Pose::planar(Timestamp(k * 10_000_000), k as f64 * 10.0, 0.0).with_yaw(0.0))
        .collect();
    Trajectory::new(Source::GroundTruth, samples).unwrap()
}

#[test]
fn dropout_is_binomial() {
    // 1200 scheduled emissions at 10 Hz.
    let gt = straight(119.9);
    for seed in 0..5 {
        let em = ErrorModel {
            dropout_prob: 0.5,
            seed,
            ..ErrorModel::ideal(10.0)
        };
        let n = simulate_lts(&gt, &em).unwrap().len();
        // 3 sigma of Binomial(1200, 0.5) is about 52.
        assert!((550..=650).contains(&n), "seed {seed}: {n}");
    }
}

#[test]
fn planar_noise_has_rayleigh_mean() {
    let gt = straight(120.0);
    let em = ErrorModel {
        noise_sigma_mm: [10.0, 10.0, 0.0],
        seed: 5,
        ..ErrorModel::ideal(100.0)
    };
    let lts = simulate_lts(&gt, &em).unwrap();
    let errs = compute_stream_errors(&gt, &lts);
    assert!(errs.len() >= 10_000);
    let mean = errs.iter().map(|e| e.horizontal_mm).sum::<f64>() / errs.len() as f64;
    let rayleigh = 10.0 * (std::f64::consts::PI / 2.0).sqrt();
    assert!((mean - rayleigh).abs() / rayleigh < 0.03, "{mean} vs {rayleigh}");
}

#[test]
fn emission_spacing() {
    let gt = straight(60.0);
    for rate in [8.2, 20.4, 33.0] {
        let lts = simulate_lts(&gt, &ErrorModel::ideal(rate)).unwrap();
        let period = 1e9 / rate;
        for w in lts.samples().windows(2) {
            let d = (w[1].t - w[0].t) as f64;
            assert!((d - period).abs() <= 1.0, "{rate} Hz: {d}");
        }
        let r = compute_update_rate(&lts).unwrap().rate_hz;
        let tol = if rate == 8.2 { 0.05 } else { 0.1 };
        assert!((r - rate).abs() <= tol, "{r}");
    }
}

fn small_params(n: usize) -> ScenarioParams {
    ScenarioParams {
        area: Area { width_m: 8.0, depth_m: 6.0 },
        n_eval_poses: n,
        seed: 1,
        ..Default::default()
    }
}

#[test]
fn bias_without_noise_is_exact() {
    let tc = build_scenario(ScenarioKind::StandardDynamic, &small_params(30)).unwrap();
    let em = ErrorModel {
        bias_mm: [91.8, -21.1, 0.0],
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).unwrap();
    let r = evaluate_performance(&data, &tc, &[0.95]).unwrap();
    assert!((r.position_error_x_mm.value().unwrap().mean - 91.8).abs() < 1e-6);
    assert!((r.position_error_y_mm.value().unwrap().mean + 21.1).abs() < 1e-6);
}

#[test]
fn frame_error_is_recovered_by_alignment() {
    let tc = build_scenario(ScenarioKind::CoordinateAlignment, &small_params(24)).unwrap();
    let frame = RigidTransform::planar(30.0, 500.0, 200.0);
    let em = ErrorModel {
        frame_error: frame,
        noise_sigma_mm: [1.0, 1.0, 0.0],
        seed: 8,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).unwrap();
    let r = evaluate_performance(&data, &tc, &[0.95]).unwrap();
    let a = r.alignment.expect("coordinate alignment runs the fit");
    let inv = frame.inverse();
    assert!(lts_eval::angle::wrap_180(a.transform.yaw_deg() - inv.yaw_deg()).abs() < 0.1);
    assert!((a.transform.translation() - inv.translation()).norm() < 2.0);
}

#[test]
fn latency_scenario_closes_the_loop() {
    let tc = build_scenario(ScenarioKind::Latency, &ScenarioParams { n_eval_poses: 20, ..Default::default() }).unwrap();
    assert!(tc.conditions.nominal_speed_mm_s >= 2000.0);
    let em = ErrorModel {
        latency_s: 0.15,
        noise_sigma_mm: [5.0, 5.0, 0.0],
        seed: 2,
        ..ErrorModel::ideal(20.0)
    };
    let data = run_experiment(&tc, &em).unwrap();
    let ms = estimate_latency(&data.gt, &data.lts, 100.0).unwrap();
    assert!((ms - 150.0).abs() <= 7.5, "{ms}");
}

#[test]
fn static_gate_accepts_every_dwell() {
    let tc = build_scenario(ScenarioKind::StandardStatic, &small_params(20)).unwrap();
    let data = run_experiment(&tc, &ErrorModel::ideal(10.0)).unwrap();
    assert_eq!(data.static_gate_log.len(), 20);
    assert!(data.static_gate_log.iter().all(|g| g.accepted));
}
