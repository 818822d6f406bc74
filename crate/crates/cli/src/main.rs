use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use lts_eval::metrics::{evaluate_performance_with, EvalConfig, PerformanceResults};
use lts_eval::requirements::ApplicationProfile;
use lts_eval::scenario::{build_scenario, validate_test_case, Area, ScenarioKind, ScenarioParams, TestCase};
use lts_eval::testbed::{run_experiment_at, ErrorModel, DEFAULT_GT_RATE_HZ};
use lts_eval_cli::io::{read_experiment, read_yaml, write_experiment, write_yaml};
use lts_eval_cli::{
    evaluate_profile, exit_code, format_matrix, invalid, metric_error, pipeline, report,
    results_name, EXIT_INVALID, EXIT_OK,
};

#[derive(Parser)]
#[command(name = "lts-eval", version, about = "Test and evaluation of localization and tracking systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and validate a test case.
    Scenario {
        #[arg(long)]
        kind: ScenarioKind,
        /// Test area as WIDTHxDEPTH in metres, e.g. 10x10.
        #[arg(long, value_parser = parse_area, default_value = "10x10")]
        area: Area,
        #[arg(long, default_value_t = 63)]
        poses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nominal_speed_mm_s: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a test case through the synthetic testbed.
    Simulate {
        #[arg(long)]
        testcase: PathBuf,
        #[arg(long)]
        error_model: PathBuf,
        /// Overrides the error model's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GT_RATE_HZ)]
        gt_rate_hz: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute performance metrics for an experiment.
    Evaluate {
        /// experiment.yaml or the directory holding it.
        #[arg(long)]
        experiment: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = EvalConfig::default().quantiles)]
        quantiles: Vec<f64>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Match performance results against an application profile.
    Match {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export plot data from performance results.
    Report {
        #[arg(long)]
        results: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run scenario, simulation, evaluation, matching and reporting from a manifest.
    Pipeline {
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn parse_area(s: &str) -> Result<Area, String> {
    let (w, d) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxDEPTH, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok(Area { width_m: num(w)?, depth_m: num(d)? })
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn validated(tc: &TestCase) -> Result<()> {
    let report = validate_test_case(tc);
    warn_all(&report.warnings);
    if report.is_ok() {
        Ok(())
    } else {
        Err(invalid(report.errors.join("; ")))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Scenario { kind, area, poses, seed, nominal_speed_mm_s, out } => {
            let mut params = ScenarioParams { area, n_eval_poses: poses, seed, ..Default::default() };
            if let Some(v) = nominal_speed_mm_s {
                params.nominal_speed_mm_s = v;
            }
            let tc = build_scenario(kind, &params).map_err(invalid)?;
            validated(&tc)?;
            write_yaml(&out, &tc)?;
            println!("{}: {} evaluation poses -> {}", tc.id, tc.eval_poses.len(), out.display());
        }
        Command::Simulate { testcase, error_model, seed, name, gt_rate_hz, out } => {
            let tc: TestCase = read_yaml(&testcase)?;
            validated(&tc)?;
            let mut em: ErrorModel = read_yaml(&error_model)?;
            if let Some(s) = seed {
                em.seed = s;
            }
            let data = run_experiment_at(&tc, &em, gt_rate_hz).map_err(invalid)?;
            let path = write_experiment(&out, &tc, &data, name.as_deref())?;
            println!("{} GT / {} LTS samples -> {}", data.gt.len(), data.lts.len(), path.display());
        }
        Command::Evaluate { experiment, quantiles, name, out } => {
            let loaded = read_experiment(&experiment)?;
            let cfg = EvalConfig {
                quantiles,
                include_error_samples: true,
                lts_name: name.or(loaded.lts_name),
                ..Default::default()
            };
            let r = evaluate_performance_with(&loaded.data, &loaded.testcase, &cfg).map_err(metric_error)?;
            write_yaml(&out, &r)?;
            println!("{} matched visits -> {}", r.sample_count, out.display());
        }
        Command::Match { profile, results, out } => {
            let profile: ApplicationProfile = read_yaml(&profile)?;
            let named = results
                .iter()
                .map(|p| {
                    let r: PerformanceResults = read_yaml(p)?;
                    Ok((results_name(p, &r), r))
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, (n, _)) in named.iter().enumerate() {
                if named[..i].iter().any(|(o, _)| o == n) {
                    return Err(invalid(format!("two results files are named `{n}`")));
                }
            }
            let eval = evaluate_profile(&profile, &named)?;
            write_yaml(&out, &eval)?;
            print!("{}", format_matrix(&eval));
        }
        Command::Report { results, out } => {
            let r: PerformanceResults = read_yaml(&results)?;
            report::write_plot_data(&r, &out)?;
            println!("{} error samples -> {}", r.error_samples.len(), out.display());
        }
        Command::Pipeline { manifest } => {
            let summary = pipeline::run_pipeline(&manifest)
                .with_context(|| format!("pipeline {}", manifest.display()))?;
            warn_all(&summary.warnings);
            for (name, r) in &summary.results {
                println!("{name}: {} matched visits", r.sample_count);
            }
            for e in &summary.evaluations {
                print!("{}", format_matrix(e));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            let code = exit_code(&e);
            let label = if code == EXIT_INVALID { "invalid input" } else { "error" };
            eprintln!("{label}: {e:#}");
            ExitCode::from(code as u8)
        }
    }
}
