//! Command-line front end: run configs, reproduce the reference tables,
//! fit decay rates and verify the invariant suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use avd_lab::experiments::{self, presets, report, ExperimentConfig, OutputFormat, RunOptions};

#[derive(Parser)]
#[command(
    name = "avd-lab",
    about = "Numerical laboratory for inertial gradient dynamics with a vanishing Tikhonov term",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory for CSV/JSON reports.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Override the integrator's relative tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Override the experiment horizon.
    #[arg(long, global = true)]
    horizon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config file.
    Simulate { config: PathBuf },
    /// Reproduce a preset's value table and compare it with the embedded
    /// reference (paper_case1, paper_case4, paper_compare).
    Table { preset: String },
    /// Fit decay-rate exponents for a preset (paper_case2, paper_case3).
    Rates { preset: String },
    /// Run a preset's invariant and property checks, or `all`.
    Verify { preset: String },
    /// Per-cell comparison of a preset's table against the reference.
    Compare { preset: String },
    /// List the compiled-in presets.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions {
        out_dir: cli.out.clone(),
        format: match cli.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
    };

    let outcome = match &cli.command {
        Command::Simulate { config } => simulate(config, &cli, &options),
        Command::Table { preset } => table(preset, &options),
        Command::Rates { preset } => rates(preset, &options),
        Command::Verify { preset } => verify(preset, &options),
        Command::Compare { preset } => compare(preset, &options),
        Command::Presets => {
            for name in presets::PRESET_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
    };

    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

type CliResult = Result<bool, avd_lab::Error<f64>>;

fn simulate(path: &PathBuf, cli: &Cli, options: &RunOptions) -> CliResult {
    let text = std::fs::read_to_string(path)?;
    let mut config = ExperimentConfig::from_toml(&text)?;
    if let Some(rel) = cli.rel_tol {
        config.integrator.rel_tol = Some(rel);
    }
    if let Some(h) = cli.horizon {
        config.horizon = h;
    }
    let bundle = experiments::run(&config, options)?;
    println!(
        "ran `{}`: {} accepted / {} rejected steps; wrote {}",
        config.name,
        bundle.accepted_steps,
        bundle.rejected_steps,
        bundle.files.join(", ")
    );
    if let Some(table) = &bundle.table {
        for (t, v) in table.times.iter().zip(&table.values) {
            println!("  x({t}) = {v:.9}");
        }
    }
    if let Some(rate) = &bundle.rate {
        println!(
            "  envelope exponent {:.4} (r2 {:.4}) on [{}, {}]",
            rate.exponent, rate.r_squared, rate.window.0, rate.window.1
        );
    }
    if let Some((first, last)) = bundle.ergodic_first_last {
        println!("  ergodic average: first {first:.6}, last {last:.6}");
    }
    if !bundle.checks.is_empty() {
        print!("{}", report::render_checks_text(&bundle.checks));
    }
    Ok(bundle.all_passed())
}

fn table(preset: &str, options: &RunOptions) -> CliResult {
    let (table, comparison) = experiments::table_for_preset(preset, options)?;
    print!("{}", report::render_table_text(&table, Some(&comparison)));
    Ok(comparison.pass)
}

fn rates(preset: &str, options: &RunOptions) -> CliResult {
    let rates = experiments::rates_for_preset(preset, options)?;
    for row in &rates.rows {
        let verdict = match row.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "  - ",
        };
        println!(
            "{verdict} rate[{}]: exponent {:.4} expected {} (tol {}) r2 {:.4}",
            row.label,
            row.exponent,
            row.expected.map(|e| format!("{e:.4}")).unwrap_or_default(),
            row.tolerance.map(|t| format!("{t}")).unwrap_or_default(),
            row.r_squared,
        );
    }
    Ok(rates.all_passed())
}

fn verify(preset: &str, options: &RunOptions) -> CliResult {
    let checks = if preset == "all" {
        experiments::verify_all()?
    } else {
        experiments::verify_preset(preset)?
    };
    if preset == "all" || preset == "tikhonov" {
        for (label, rows) in experiments::checks::tikhonov_paths()? {
            let path = options
                .out_dir
                .join(format!("tikhonov_{}.csv", label.replace(':', "_")));
            report::write_path_csv(&path, &rows)?;
        }
    }
    print!("{}", report::render_checks_text(&checks));
    Ok(checks.iter().all(|c| c.passed))
}

fn compare(preset: &str, options: &RunOptions) -> CliResult {
    let (_, comparison) = experiments::table_for_preset(preset, options)?;
    for cell in &comparison.cells {
        println!(
            "{} [{}, t={}] computed {:.6} reference {:.6} |dev| {:.3e} tol {:.3e}{}",
            if cell.pass { "PASS" } else { "FAIL" },
            cell.row,
            cell.time,
            cell.computed,
            cell.reference,
            cell.deviation,
            cell.tolerance,
            if cell.oracle_backed {
                ""
            } else {
                " (numerics-only)"
            },
        );
    }
    println!(
        "{}: {} cells, {} failing",
        comparison.table_id,
        comparison.cells.len(),
        comparison.failing_cells().count()
    );
    Ok(comparison.pass)
}
