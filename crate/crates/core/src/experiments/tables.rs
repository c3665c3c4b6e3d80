//! Reference tables for the flagship runs and the per-cell comparison
//! machinery.
//!
//! The embedded values are published reference results for the
//! zero-objective system with `x(1) = 1`, `ẋ(1) = 0`. The slow-schedule
//! table (`case1`) has no closed form and is reproducible only by
//! integration, so its tolerance policy is generous; the other tables are
//! oracle-backed. Two reference cells are suspected misprints (they
//! disagree in sign with both high-accuracy integration and, for the
//! comparison table, the exact Bessel solution); the comparison still
//! checks them as printed and reports the deviation.

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Integrated,
    ClosedForm,
}

/// A computed table: `values[row][col]` at `times[col]`, integrated, with
/// an optional closed-form companion of the same shape.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub preset: String,
    pub row_labels: Vec<String>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub provenance: Provenance,
    pub oracle_values: Option<Vec<Vec<f64>>>,
    /// Formula caveats propagated from the closed-form cases.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDeviation {
    pub row: String,
    pub time: f64,
    pub computed: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub oracle_backed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableComparison {
    pub table_id: String,
    pub cells: Vec<CellDeviation>,
    pub pass: bool,
}

impl TableComparison {
    pub fn failing_cells(&self) -> impl Iterator<Item = &CellDeviation> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

pub struct ReferenceTable {
    pub id: &'static str,
    pub row_labels: &'static [&'static str],
    pub times: &'static [f64],
    pub values: &'static [&'static [f64]],
    /// Whether an exact solution backs this table's rows.
    pub oracle_backed: bool,
    tolerance: fn(row: usize, col: usize, reference: f64) -> f64,
}

/// Slow schedule `ε = 1/(1+ln t)`, rows α ∈ {1,2,3,4}, columns
/// t ∈ {10, 10², 10³}. Numerics-only (no closed form exists).
pub static CASE1: ReferenceTable = ReferenceTable {
    id: "case1",
    row_labels: &["alpha=1", "alpha=2", "alpha=3", "alpha=4"],
    times: &[10.0, 100.0, 1000.0],
    values: &[
        &[0.319, -0.138, 0.048],
        &[0.038, -0.008, 0.002],
        &[0.04, 0.001, 6e-5],
        &[-0.06, 6e-4, -2.7e-6],
    ],
    oracle_backed: false,
    tolerance: |row, col, reference| {
        if row == 2 && col == 0 {
            // the one-significant-digit cell gets the widened tolerance
            0.01
        } else {
            f64::max(0.005, 0.25 * reference.abs())
        }
    },
};

/// Superfast schedule `ε = 1/t³`, α = 4, columns t ∈ {10, …, 10⁴}.
pub static CASE4: ReferenceTable = ReferenceTable {
    id: "case4",
    row_labels: &["alpha=4"],
    times: &[10.0, 100.0, 1000.0, 10000.0],
    values: &[&[0.74257, 0.709214, 0.70602, 0.705703]],
    oracle_backed: true,
    tolerance: |_, _, _| 5e-4,
};

/// Vanishing damping (α = 3) against fixed friction (γ = 3), both with
/// `ε = 1/t`, columns t ∈ {10, 20, 50, 100}.
pub static COMPARE: ReferenceTable = ReferenceTable {
    id: "compare",
    row_labels: &["x (avd alpha=3)", "y (hbf gamma=3)"],
    times: &[10.0, 20.0, 50.0, 100.0],
    values: &[
        &[-0.098, 0.018, -0.010, 0.006],
        &[0.455, 0.358, 0.263, 0.208],
    ],
    oracle_backed: true,
    tolerance: |_, _, _| 0.005,
};

pub fn reference(id: &str) -> Option<&'static ReferenceTable> {
    match id {
        "case1" => Some(&CASE1),
        "case4" => Some(&CASE4),
        "compare" => Some(&COMPARE),
        _ => None,
    }
}

/// Per-cell deviations of a computed table against an embedded reference.
pub fn compare_with_reference(
    report: &TableReport,
    table_id: &str,
) -> Result<TableComparison, Error<f64>> {
    let reference = reference(table_id).ok_or_else(|| Error::UnknownBuiltin {
        kind: "reference table",
        name: table_id.to_string(),
    })?;
    if report.values.len() != reference.values.len()
        || report.times.len() != reference.times.len()
    {
        return Err(Error::Shape(format!(
            "computed table is {}x{}, reference {} is {}x{}",
            report.values.len(),
            report.times.len(),
            table_id,
            reference.values.len(),
            reference.times.len()
        )));
    }
    for (have, want) in report.times.iter().zip(reference.times) {
        if (have - want).abs() > 1e-9 * want.abs() {
            return Err(Error::Shape(format!(
                "table time {have} does not match reference time {want}"
            )));
        }
    }

    let mut cells = Vec::new();
    for (i, row) in report.values.iter().enumerate() {
        for (j, &computed) in row.iter().enumerate() {
            let refv = reference.values[i][j];
            let tolerance = (reference.tolerance)(i, j, refv);
            let deviation = (computed - refv).abs();
            cells.push(CellDeviation {
                row: reference.row_labels[i].to_string(),
                time: reference.times[j],
                computed,
                reference: refv,
                deviation,
                tolerance,
                pass: deviation <= tolerance,
                oracle_backed: reference.oracle_backed,
            });
        }
    }
    let pass = cells.iter().all(|c| c.pass);
    Ok(TableComparison {
        table_id: table_id.to_string(),
        cells,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report_like(reference: &ReferenceTable) -> TableReport {
        TableReport {
            preset: reference.id.to_string(),
            row_labels: reference.row_labels.iter().map(|s| s.to_string()).collect(),
            times: reference.times.to_vec(),
            values: reference.values.iter().map(|r| r.to_vec()).collect(),
            provenance: Provenance::Integrated,
            oracle_values: None,
            notes: Vec::new(),
        }
    }

    #[test]
    fn identical_tables_have_zero_deviation() {
        for table in [&CASE1, &CASE4, &COMPARE] {
            let cmp = compare_with_reference(&report_like(table), table.id).unwrap();
            assert!(cmp.pass);
            assert!(cmp.cells.iter().all(|c| c.deviation == 0.0));
        }
    }

    #[test]
    fn widened_cell_tolerance() {
        // (alpha=3, t=10) carries the widened 0.01; neighbors use the
        // max(0.005, 25%) policy
        assert_eq!((CASE1.tolerance)(2, 0, 0.04), 0.01);
        assert_eq!((CASE1.tolerance)(0, 0, 0.319), 0.25 * 0.319);
        assert_eq!((CASE1.tolerance)(3, 2, -2.7e-6), 0.005);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut report = report_like(&CASE4);
        report.values[0].pop();
        report.times.pop();
        assert!(compare_with_reference(&report, "case1").is_err());
        assert!(compare_with_reference(&report_like(&CASE4), "nope").is_err());
    }

    #[test]
    fn failing_cells_are_named() {
        let mut report = report_like(&CASE4);
        report.values[0][1] += 1.0;
        let cmp = compare_with_reference(&report, "case4").unwrap();
        assert!(!cmp.pass);
        let failing: Vec<_> = cmp.failing_cells().collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].time, 100.0);
    }
}
