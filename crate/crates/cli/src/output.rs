use std::fs;
use std::io::Write;
use std::path::Path;

use bsfem::verify::{ElementError, PointResult, SensitivityTable};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Columns of the series CSV, in order.
pub const SERIES_COLUMNS: [&str; 10] = [
    "case",
    "global_family",
    "global_order",
    "local_order",
    "h_G",
    "dof",
    "l2_error",
    "cg_iters",
    "cg_converged",
    "spd",
];

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One line of the series CSV. Also stored in each point's JSON record so a
/// resumed run can rebuild the table without solving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub case: String,
    pub global_family: String,
    pub global_order: usize,
    pub local_order: usize,
    pub h_global: f64,
    pub dof: usize,
    pub l2_error: f64,
    pub cg_iters: usize,
    pub cg_converged: bool,
    /// `positive-definite`, `not-positive-definite`, or empty when not tested.
    pub spd: String,
}

impl SeriesRow {
    pub fn of(r: &PointResult) -> Self {
        SeriesRow {
            case: r.spec.case.to_string(),
            global_family: r.spec.global.name().to_string(),
            global_order: r.spec.global.order(),
            local_order: r.spec.local_order,
            h_global: r.h_global,
            dof: r.dofs,
            l2_error: r.error.relative,
            cg_iters: r.solve.iterations,
            cg_converged: r.solve.converged,
            spd: r.spd.as_ref().map(|v| v.label().to_string()).unwrap_or_default(),
        }
    }

    fn record(&self) -> [String; 10] {
        [
            self.case.clone(),
            self.global_family.clone(),
            self.global_order.to_string(),
            self.local_order.to_string(),
            num(self.h_global),
            self.dof.to_string(),
            num(self.l2_error),
            self.cg_iters.to_string(),
            self.cg_converged.to_string(),
            self.spd.clone(),
        ]
    }
}

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension(format!("{}.tmp", path.extension().and_then(|e| e.to_str()).unwrap_or("")));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Csv(e.to_string()))
}

pub fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<(), CliError> {
    write_atomic(path, &csv_bytes(&SERIES_COLUMNS, rows.iter().map(SeriesRow::record))?)
}

pub fn write_residuals(path: &Path, history: &[(usize, f64)]) -> Result<(), CliError> {
    let rows = history.iter().map(|&(i, r)| [i.to_string(), num(r)]);
    write_atomic(path, &csv_bytes(&["iteration", "relative_residual"], rows)?)
}

pub fn write_elements(path: &Path, elements: &[ElementError]) -> Result<(), CliError> {
    let rows = elements.iter().map(|e| {
        [
            e.index[0].to_string(),
            e.index[1].to_string(),
            e.index[2].to_string(),
            num(e.centroid[0]),
            num(e.centroid[1]),
            num(e.centroid[2]),
            num(e.squared_error),
            e.crossing.to_string(),
        ]
    });
    let header = ["i", "j", "k", "centroid_x", "centroid_y", "centroid_z", "squared_error", "crossing"];
    write_atomic(path, &csv_bytes(&header, rows)?)
}

pub fn write_sensitivity(path: &Path, table: &SensitivityTable) -> Result<(), CliError> {
    let rows = table.rows.iter().map(|r| {
        [
            r.points.to_string(),
            num(r.l2_error),
            r.change.map(num).unwrap_or_default(),
            r.cg_iterations.to_string(),
            r.cg_converged.to_string(),
            (table.stabilization_order == Some(r.points)).to_string(),
        ]
    });
    let header = ["gauss_points", "l2_error", "relative_change", "cg_iters", "cg_converged", "stabilized_here"];
    write_atomic(path, &csv_bytes(&header, rows)?)
}
