use serde::Serialize;

use super::{l2_error, run_model, run_point, ElementError, ManufacturedCase, PointResult, PointSpec};
use crate::assembly::{assemble_system, Route};
use crate::error::Result;
use crate::mesh::{BasisFamily, SuperposedModel};
use crate::solver::{cg_solve, CgSettings};

/// Relative change below which the error counts as settled.
pub const STABLE_CHANGE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub points: usize,
    pub l2_error: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
    /// `|ε(n) - ε(n-1)| / ε(n)`; absent on the first row.
    pub change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityTable {
    /// Larger of the two basis orders.
    pub p: usize,
    pub rows: Vec<SensitivityRow>,
    /// Smallest order from which every later change stays below 5%.
    pub stabilization_order: Option<usize>,
}

impl SensitivityTable {
    pub fn error_at(&self, points: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.points == points).map(|r| r.l2_error)
    }

    /// `|ε(n ± 1) - ε(n)| / ε(n)`, the larger of the two sides.
    pub fn spread_around(&self, points: usize) -> Option<f64> {
        let mid = self.error_at(points)?;
        let lo = self.error_at(points - 1)?;
        let hi = self.error_at(points + 1)?;
        Some(((lo - mid).abs() / mid).max((hi - mid).abs() / mid))
    }
}

/// Solves one model with every Gauss order in `orders` and tabulates the
/// error, using assembly quadrature only; the error integral keeps its
/// default rule.
pub fn quadrature_sensitivity(
    model: &SuperposedModel,
    orders: std::ops::RangeInclusive<usize>,
    problem: &ManufacturedCase,
    cg: &CgSettings,
) -> Result<SensitivityTable> {
    let p = model.global().order().max(model.local().order());
    let mut rows: Vec<SensitivityRow> = Vec::new();
    for n in orders {
        let system = assemble_system(model, n, problem, Route::Tensor)?;
        let (d, report) = cg_solve(&system.matrix, &system.rhs, cg)?;
        let (g, l) = system.partition.expand(&d);
        let e = l2_error(model, &g, &l, problem, None, false)?.relative;
        let change = rows.last().map(|r| (e - r.l2_error).abs() / e);
        rows.push(SensitivityRow {
            points: n,
            l2_error: e,
            cg_iterations: report.iterations,
            cg_converged: report.converged,
            change,
        });
    }
    let stabilization_order = stabilization_order(&rows);
    Ok(SensitivityTable { p, rows, stabilization_order })
}

/// Smallest order `n` such that the changes at `n` and every later order
/// are below [`STABLE_CHANGE`].
pub fn stabilization_order(rows: &[SensitivityRow]) -> Option<usize> {
    let mut found = None;
    for row in rows.iter().rev() {
        match row.change {
            Some(c) if c < STABLE_CHANGE => found = Some(row.points),
            Some(_) => break,
            None => {}
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub h_global: f64,
    pub elements: usize,
    pub dofs: usize,
    pub l2_error: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
    pub spd: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSeries {
    pub entries: Vec<SeriesEntry>,
    /// Least-squares slope of `log ε` against `log h` over converged entries.
    pub slope: Option<f64>,
}

impl From<&PointResult> for SeriesEntry {
    fn from(r: &PointResult) -> Self {
        SeriesEntry {
            h_global: r.h_global,
            elements: r.spec.elements,
            dofs: r.dofs,
            l2_error: r.error.relative,
            cg_iterations: r.solve.iterations,
            cg_converged: r.solve.converged,
            spd: r.spd.as_ref().map(|v| v.positive_definite),
        }
    }
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl ConvergenceSeries {
    pub fn from_entries(mut entries: Vec<SeriesEntry>) -> Self {
        entries.sort_by(|a, b| b.h_global.total_cmp(&a.h_global));
        let points: Vec<(f64, f64)> = entries
            .iter()
            .filter(|e| e.cg_converged && e.l2_error > 0.0)
            .map(|e| (e.h_global.ln(), e.l2_error.ln()))
            .collect();
        let slope = fit_slope(&points);
        Self { entries, slope }
    }
}

/// Runs `template` on each mesh in `elements`. Failed points are skipped
/// and returned alongside the series.
pub fn convergence_study(template: &PointSpec, elements: &[usize]) -> (ConvergenceSeries, Vec<(usize, crate::Error)>) {
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for &n in elements {
        let spec = PointSpec { elements: n, ..template.clone() };
        match run_point(&spec) {
            Ok(r) => entries.push(SeriesEntry::from(&r)),
            Err(e) => failures.push((n, e)),
        }
    }
    (ConvergenceSeries::from_entries(entries), failures)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorDistribution {
    pub global: BasisFamily,
    pub ratio: (usize, usize),
    pub quadrature_points: usize,
    pub l2_error: f64,
    pub cg_converged: bool,
    pub elements: Vec<ElementError>,
    pub max_crossing: f64,
    pub max_non_crossing: f64,
}

impl ErrorDistribution {
    /// Max squared error over crossing elements divided by that over the rest.
    pub fn crossing_ratio(&self) -> f64 {
        self.max_crossing / self.max_non_crossing
    }
}

/// Per-local-element errors with a linear local basis, a local box of
/// `extent` global elements refined at `ratio`, and `p + 1`-point Gauss
/// quadrature.
pub fn error_distribution_experiment(
    global: BasisFamily,
    global_elements: usize,
    extent: usize,
    ratio: (usize, usize),
) -> Result<ErrorDistribution> {
    let model = SuperposedModel::with_ratio(global, global_elements, 1, extent, ratio, (0.0, 2.0))?;
    let mut spec = PointSpec::new(global, 1, crate::mesh::Case::B, global_elements);
    spec.quadrature = Some(global.order() + 1);
    spec.keep_element_errors = true;
    let (result, _) = run_model(&model, &spec)?;
    let max_of = |crossing: bool| {
        result.error.elements.iter().filter(|e| e.crossing == crossing).map(|e| e.squared_error).fold(0.0, f64::max)
    };
    Ok(ErrorDistribution {
        global,
        ratio,
        quadrature_points: result.quadrature_points,
        l2_error: result.error.relative,
        cg_converged: result.solve.converged,
        max_crossing: max_of(true),
        max_non_crossing: max_of(false),
        elements: result.error.elements,
    })
}
