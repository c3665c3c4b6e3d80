//! Report writers: CSV series (deterministic, 17 significant digits),
//! JSON bundles with the config echoed for provenance, and aligned-column
//! text for humans.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Error;
use crate::Series;

use super::checks::CheckResult;
use super::tables::{TableComparison, TableReport};

/// 17 significant digits, `.` decimal separator, locale-independent.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a `(t, value)` series with the `t,value` header.
pub fn write_series_csv(path: &Path, series: &Series<f64>) -> Result<(), Error<f64>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["t", "value"])?;
    for &(t, v) in series {
        writer.write_record([fmt_float(t), fmt_float(v)])?;
    }
    writer.flush()?;
    Ok(())
}

/// Long-format table export: one record per cell, closed-form companion
/// values included when present.
pub fn write_table_csv(path: &Path, report: &TableReport) -> Result<(), Error<f64>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["row", "t", "value", "source"])?;
    for (i, row) in report.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            writer.write_record([
                report.row_labels[i].clone(),
                fmt_float(report.times[j]),
                fmt_float(v),
                "integrated".into(),
            ])?;
        }
        if let Some(oracle) = &report.oracle_values {
            for (j, &v) in oracle[i].iter().enumerate() {
                if v.is_nan() {
                    continue;
                }
                writer.write_record([
                    report.row_labels[i].clone(),
                    fmt_float(report.times[j]),
                    fmt_float(v),
                    "closed_form".into(),
                ])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// `epsilon,norm,residual` rows of a Tikhonov curve.
pub fn write_path_csv(path: &Path, rows: &[(f64, f64, f64)]) -> Result<(), Error<f64>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["epsilon", "norm", "residual"])?;
    for &(eps, norm, residual) in rows {
        writer.write_record([fmt_float(eps), fmt_float(norm), fmt_float(residual)])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<(), Error<f64>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    fs::write(path, buf)?;
    Ok(())
}

/// Aligned-column rendering of a table, with the reference comparison
/// appended when available.
pub fn render_table_text(report: &TableReport, comparison: Option<&TableComparison>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "table `{}`", report.preset);

    let label_width = report
        .row_labels
        .iter()
        .map(|l| l.len())
        .max()
        .unwrap_or(4)
        .max(4)
        + 14;
    let _ = write!(out, "{:label_width$}", "");
    for t in &report.times {
        let _ = write!(out, "{t:>14.6}");
    }
    let _ = writeln!(out);
    for (i, row) in report.values.iter().enumerate() {
        let _ = write!(out, "{:label_width$}", format!("{} (int)", report.row_labels[i]));
        for v in row {
            let _ = write!(out, "{v:>14.6}");
        }
        let _ = writeln!(out);
        if let Some(oracle) = &report.oracle_values {
            if oracle[i].iter().any(|v| !v.is_nan()) {
                let _ = write!(out, "{:label_width$}", format!("{} (exact)", report.row_labels[i]));
                for v in &oracle[i] {
                    if v.is_nan() {
                        let _ = write!(out, "{:>14}", "-");
                    } else {
                        let _ = write!(out, "{v:>14.6}");
                    }
                }
                let _ = writeln!(out);
            }
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    if let Some(cmp) = comparison {
        let _ = writeln!(
            out,
            "reference comparison `{}`: {}",
            cmp.table_id,
            if cmp.pass { "PASS" } else { "FAIL" }
        );
        for cell in &cmp.cells {
            let _ = writeln!(
                out,
                "  {} [{}, t={}] computed {:>12.6} reference {:>12.6} |dev| {:.3e} tol {:.3e}{}",
                if cell.pass { "ok  " } else { "FAIL" },
                cell.row,
                cell.time,
                cell.computed,
                cell.reference,
                cell.deviation,
                cell.tolerance,
                if cell.oracle_backed { "" } else { " (numerics-only)" },
            );
        }
    }
    out
}

pub fn render_checks_text(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    for check in checks {
        let _ = writeln!(out, "{check}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(
        out,
        "{} checks, {} failed",
        checks.len(),
        failed
    );
    out
}
