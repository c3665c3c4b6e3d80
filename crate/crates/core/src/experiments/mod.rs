//! Experiment runner: declarative configs, compiled-in presets, reference
//! tables, verification checks and report output.

pub mod checks;
pub mod config;
pub mod presets;
pub mod report;
pub mod tables;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostics::{self, RateFit, ReportOptions};
use crate::error::Error;
use crate::linalg;
use crate::Series;

pub use checks::{verify_all, verify_preset, CheckResult};
pub use config::{ExperimentConfig, OutputRequest};
pub use presets::{preset_configs, PRESET_NAMES};
pub use tables::{compare_with_reference, TableComparison, TableReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

/// Everything one config run produced; the JSON form echoes the config.
#[derive(Clone, Debug, Serialize)]
pub struct RunBundle {
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSlice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateFit<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ergodic_first_last: Option<(f64, f64)>,
    pub checks: Vec<CheckResult>,
    pub files: Vec<String>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl RunBundle {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `x(t)` at the requested table times for a single run.
#[derive(Clone, Debug, Serialize)]
pub struct TableSlice {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Runs one experiment config: integrates, produces the requested reports,
/// writes series CSVs (and a JSON bundle in JSON mode).
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<RunBundle, Error<f64>> {
    let (resolved, traj) = checks::integrate_config(config)?;
    let mut files = Vec::new();
    let mut bundle_checks = Vec::new();

    // primary trajectory export: first coordinate in 1-D, norm otherwise
    let x_series: Series<f64> = if resolved.spec.dim() == 1 {
        traj.map_series(|_, x, _| x[0])
    } else {
        traj.map_series(|_, x, _| linalg::norm(x))
    };
    let x_path = options.out_dir.join(format!("{}_x.csv", config.name));
    report::write_series_csv(&x_path, &x_series)?;
    files.push(relative_name(&x_path));

    let mut table = None;
    let mut rate = None;
    let mut ergodic_first_last = None;

    for request in &resolved.outputs {
        match request {
            OutputRequest::TableAt(times) => {
                let values = times
                    .iter()
                    .map(|&want| {
                        traj.times()
                            .iter()
                            .position(|&t| t == want)
                            .map(|i| traj.x(i)[0])
                            .ok_or(Error::OutOfRange {
                                what: "table time",
                                value: want,
                                bounds: "within [t0, horizon]",
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let slice = TableSlice {
                    times: times.clone(),
                    values,
                };
                let path = options.out_dir.join(format!("{}_table.csv", config.name));
                let series: Series<f64> = slice
                    .times
                    .iter()
                    .copied()
                    .zip(slice.values.iter().copied())
                    .collect();
                report::write_series_csv(&path, &series)?;
                files.push(relative_name(&path));
                table = Some(slice);
            }
            OutputRequest::RateWindow(lo, hi) => {
                let report_opts = ReportOptions {
                    rate_window: Some((*lo, *hi)),
                    ..Default::default()
                };
                let diag = diagnostics::collect(&traj, &report_opts)?;
                rate = diag.rate;
            }
            OutputRequest::Ergodic => {
                let p = resolved
                    .spec
                    .problem()
                    .min_norm_point()
                    .ok_or_else(|| {
                        Error::MissingData(
                            "ergodic output needs a known minimum-norm point".into(),
                        )
                    })?
                    .to_vec();
                let series = diagnostics::ergodic_average(&traj, &p)?;
                let path = options.out_dir.join(format!("{}_ergodic.csv", config.name));
                report::write_series_csv(&path, &series)?;
                files.push(relative_name(&path));
                ergodic_first_last = Some((
                    series.first().expect("nonempty").1,
                    series.last().expect("nonempty").1,
                ));
            }
            OutputRequest::Invariants => {
                let w = diagnostics::global_energy(&traj);
                let path = options.out_dir.join(format!("{}_w.csv", config.name));
                report::write_series_csv(&path, &w)?;
                files.push(relative_name(&path));
                bundle_checks.extend(checks_for_invariants(config, &traj)?);
            }
            OutputRequest::OracleCompare => match checks::closed_form_for(config) {
                Some(case) => bundle_checks.push(checks::oracle_agreement(&traj, case)),
                None => {
                    return Err(Error::Config(format!(
                        "`oracle_compare` requested but `{}` matches no closed-form case",
                        config.name
                    )))
                }
            },
        }
    }

    let bundle = RunBundle {
        config: config.clone(),
        table,
        rate,
        ergodic_first_last,
        checks: bundle_checks,
        files,
        accepted_steps: traj.stats.accepted,
        rejected_steps: traj.stats.rejected,
    };
    if options.format == OutputFormat::Json {
        let path = options.out_dir.join(format!("{}.json", config.name));
        report::write_json(&path, &bundle)?;
    }
    Ok(bundle)
}

fn checks_for_invariants(
    config: &ExperimentConfig,
    traj: &crate::integrator::Trajectory<f64>,
) -> Result<Vec<CheckResult>, Error<f64>> {
    let label = config.name.clone();
    let w = diagnostics::global_energy(traj);
    let increase = diagnostics::check_energy_decay(&w);
    let threshold = checks::ENERGY_DECAY_SCALE * (1.0 + w[0].1.abs());
    let mut out = vec![CheckResult {
        name: format!("energy_decay[{label}]"),
        passed: increase <= threshold,
        value: increase,
        threshold,
        detail: "max upward step of W between samples".into(),
    }];
    if traj.spec().alpha().is_some() && traj.spec().problem().inf_value().is_some() {
        let (lhs, bound) = diagnostics::velocity_integral_bound(traj)?;
        out.push(CheckResult {
            name: format!("velocity_integral[{label}]"),
            passed: lhs - bound <= checks::VELOCITY_INTEGRAL_SLACK,
            value: lhs - bound,
            threshold: checks::VELOCITY_INTEGRAL_SLACK,
            detail: format!("trapezoid of (1/t)|v|^2 is {lhs:.6e}, bound {bound:.6e}"),
        });
    }
    Ok(out)
}

/// One row of a rates report.
#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub label: String,
    pub exponent: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub preset: String,
    pub rows: Vec<RateRow>,
}

impl RateReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass.unwrap_or(true))
    }
}

/// Decay-rate report for `paper_case2` or `paper_case3`.
pub fn rates_for_preset(name: &str, options: &RunOptions) -> Result<RateReport, Error<f64>> {
    let targets = checks::rate_targets(name)?;
    let configs = preset_configs(name)?;
    let mut rows = Vec::new();
    for (idx, expected, tolerance, label) in targets {
        let config = &configs[idx];
        let window = config
            .outputs
            .iter()
            .find_map(|o| o.strip_prefix("rate_window:"))
            .and_then(|args| {
                let mut it = args.split(',');
                Some((
                    it.next()?.trim().parse::<f64>().ok()?,
                    it.next()?.trim().parse::<f64>().ok()?,
                ))
            })
            .unwrap_or((100.0, 1e5));
        let (_, traj) = checks::integrate_config(config)?;
        let abs_x: Series<f64> = traj.map_series(|_, x, _| linalg::norm(x));
        let envelope = diagnostics::upper_envelope(&abs_x, 6);
        let fit = diagnostics::rate_fit(&envelope, window)?;
        rows.push(RateRow {
            label,
            exponent: fit.exponent,
            r_squared: fit.r_squared,
            window,
            expected: Some(expected),
            tolerance: Some(tolerance),
            pass: Some((fit.exponent - expected).abs() <= tolerance),
        });
    }
    let report = RateReport {
        preset: name.to_string(),
        rows,
    };
    if options.format == OutputFormat::Json {
        let path = options.out_dir.join(format!("rates_{name}.json"));
        report::write_json(&path, &report)?;
    } else {
        let path = options.out_dir.join(format!("rates_{name}.csv"));
        write_rates_csv(&path, &report)?;
    }
    Ok(report)
}

fn write_rates_csv(path: &Path, rates: &RateReport) -> Result<(), Error<f64>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record([
        "label",
        "exponent",
        "r_squared",
        "expected",
        "tolerance",
        "pass",
    ])?;
    for row in &rates.rows {
        writer.write_record([
            row.label.clone(),
            report::fmt_float(row.exponent),
            report::fmt_float(row.r_squared),
            row.expected.map(report::fmt_float).unwrap_or_default(),
            row.tolerance.map(report::fmt_float).unwrap_or_default(),
            row.pass.map(|p| p.to_string()).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Computed table plus reference comparison for a table-bearing preset,
/// written to the output directory.
pub fn table_for_preset(
    name: &str,
    options: &RunOptions,
) -> Result<(TableReport, TableComparison), Error<f64>> {
    let (table, comparison) = checks::table_for_preset(name)?;
    if options.format == OutputFormat::Json {
        #[derive(Serialize)]
        struct TableBundle<'a> {
            table: &'a TableReport,
            comparison: &'a TableComparison,
        }
        let path = options.out_dir.join(format!("table_{name}.json"));
        report::write_json(
            &path,
            &TableBundle {
                table: &table,
                comparison: &comparison,
            },
        )?;
    } else {
        let path = options.out_dir.join(format!("table_{name}.csv"));
        report::write_table_csv(&path, &table)?;
    }
    Ok((table, comparison))
}

fn relative_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_produces_deterministic_csv() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::from_toml(
            r#"
            name = "det"
            variant = "avd_alpha_eps"
            alpha = 3.0
            schedule = "power:2"
            problem = "zero:1"
            horizon = 100.0
            outputs = ["table_at:10,100", "invariants"]
            "#,
        )
        .unwrap();
        let options = RunOptions {
            out_dir: dir.path().join("a"),
            format: OutputFormat::Csv,
        };
        let bundle = run(&config, &options).unwrap();
        assert!(bundle.all_passed());
        let first = std::fs::read(dir.path().join("a/det_x.csv")).unwrap();

        let options_b = RunOptions {
            out_dir: dir.path().join("b"),
            format: OutputFormat::Csv,
        };
        run(&config, &options_b).unwrap();
        let second = std::fs::read(dir.path().join("b/det_x.csv")).unwrap();
        assert_eq!(first, second, "CSV outputs must be byte-identical");
    }

    #[test]
    fn run_empty_outputs_is_metadata_only() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::from_toml(
            r#"
            name = "meta"
            variant = "avd_alpha"
            alpha = 2.0
            problem = "zero:1"
            horizon = 10.0
            "#,
        )
        .unwrap();
        let bundle = run(
            &config,
            &RunOptions {
                out_dir: dir.path().to_path_buf(),
                format: OutputFormat::Json,
            },
        )
        .unwrap();
        assert!(bundle.table.is_none());
        assert!(bundle.rate.is_none());
        assert!(bundle.checks.is_empty());
        assert!(bundle.accepted_steps > 0);
        assert!(dir.path().join("meta.json").exists());
    }

    #[test]
    fn oracle_compare_requires_matching_config() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::from_toml(
            r#"
            name = "no_oracle"
            variant = "avd_alpha_eps"
            alpha = 3.0
            schedule = "log_inv"
            problem = "zero:1"
            horizon = 10.0
            outputs = ["oracle_compare"]
            "#,
        )
        .unwrap();
        let err = run(
            &config,
            &RunOptions {
                out_dir: dir.path().to_path_buf(),
                format: OutputFormat::Csv,
            },
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
