use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use bsfem::solver::CgSettings;
use bsfem::verify::{quadrature_sensitivity, run_model, PointResult, PointSpec, SensitivityTable};
use serde::{Deserialize, Serialize};

use crate::config::{GridPoint, RunConfig};
use crate::output::{self, SeriesRow};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Solved,
    Reused,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointOutcome {
    pub key: String,
    pub status: Status,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub row: Option<SeriesRow>,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    wall_time_s: f64,
    solved: usize,
    reused: usize,
    failed: usize,
    series: &'static str,
    points: &'a [PointOutcome],
}

/// Per-point JSON record; `row` is all a resumed run reads back.
#[derive(Serialize)]
struct Record<'a> {
    point: &'a GridPoint,
    row: &'a SeriesRow,
    result: &'a PointResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    sensitivity: Option<&'a SensitivityTable>,
}

#[derive(Deserialize)]
struct StoredRecord {
    row: SeriesRow,
}

pub struct Summary {
    pub outcomes: Vec<PointOutcome>,
    pub series: PathBuf,
}

impl Summary {
    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }
}

pub const SERIES_FILE: &str = "series.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Runs every grid point on `config.jobs` threads, then writes the series
/// CSV in grid order and the manifest.
pub fn run(config: &RunConfig) -> Result<Summary, CliError> {
    let points_dir = config.out.join("points");
    fs::create_dir_all(&points_dir).map_err(|e| CliError::io(&points_dir, e))?;
    let clock = Instant::now();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<PointOutcome>>> = Mutex::new(vec![None; config.points.len()]);
    let total = config.points.len();
    std::thread::scope(|s| {
        for _ in 0..config.jobs.min(total) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(point) = config.points.get(i) else { break };
                let outcome = run_one(config, point, &points_dir);
                eprintln!("[{}/{total}] {}", i + 1, describe(&outcome));
                slots.lock().unwrap()[i] = Some(outcome);
            });
        }
    });
    let outcomes: Vec<PointOutcome> = slots.into_inner().unwrap().into_iter().map(Option::unwrap).collect();

    let rows: Vec<SeriesRow> = outcomes.iter().filter_map(|o| o.row.clone()).collect();
    let series = config.out.join(SERIES_FILE);
    output::write_series(&series, &rows)?;

    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config,
        wall_time_s: clock.elapsed().as_secs_f64(),
        solved: count(Status::Solved),
        reused: count(Status::Reused),
        failed: count(Status::Failed),
        series: SERIES_FILE,
        points: &outcomes,
    };
    let json = serde_json::to_vec_pretty(&manifest)?;
    output::write_atomic(&config.out.join(MANIFEST_FILE), &json)?;
    Ok(Summary { outcomes, series })
}

fn describe(o: &PointOutcome) -> String {
    match (&o.status, &o.row, &o.error) {
        (Status::Failed, _, Some(e)) => format!("{}: failed: {e}", o.key),
        (status, Some(r), _) => format!(
            "{}: {}eps {:.4e}, {} CG iterations{}{}",
            o.key,
            if *status == Status::Reused { "reused, " } else { "" },
            r.l2_error,
            r.cg_iters,
            if r.cg_converged { "" } else { " (not converged)" },
            if r.spd.is_empty() { String::new() } else { format!(", {}", r.spd) }
        ),
        _ => o.key.clone(),
    }
}

fn run_one(config: &RunConfig, point: &GridPoint, dir: &Path) -> PointOutcome {
    let key = point.key();
    let clock = Instant::now();
    let record_path = dir.join(format!("{key}.json"));
    if config.resume {
        if let Some(row) = stored_row(&record_path) {
            return PointOutcome { key, status: Status::Reused, wall_time_s: 0.0, error: None, row: Some(row) };
        }
    }
    match solve_one(config, point, dir, &record_path) {
        Ok(row) => PointOutcome {
            key,
            status: Status::Solved,
            wall_time_s: clock.elapsed().as_secs_f64(),
            error: None,
            row: Some(row),
        },
        Err(e) => PointOutcome {
            key,
            status: Status::Failed,
            wall_time_s: clock.elapsed().as_secs_f64(),
            error: Some(e.to_string()),
            row: None,
        },
    }
}

fn stored_row(path: &Path) -> Option<SeriesRow> {
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str::<StoredRecord>(&text).ok().map(|r| r.row)
}

fn solve_one(config: &RunConfig, point: &GridPoint, dir: &Path, record_path: &Path) -> Result<SeriesRow, CliError> {
    let key = point.key();
    let mut spec = PointSpec::new(point.global, point.local_order, point.case, point.elements);
    spec.quadrature = config.quad;
    spec.spd = config.spd;
    spec.keep_element_errors = config.error_field;
    let model = spec.model()?;
    let (mut result, system) = run_model(&model, &spec)?;

    output::write_residuals(&dir.join(format!("{key}_residual.csv")), &result.solve.history)?;
    if config.error_field {
        output::write_elements(&dir.join(format!("{key}_elements.csv")), &result.error.elements)?;
    }
    if config.export_matrix {
        let mut bytes = Vec::new();
        system.matrix.csr().write_matrix_market(&mut bytes).map_err(|e| CliError::io(dir, e))?;
        output::write_atomic(&dir.join(format!("{key}.mtx")), &bytes)?;
    }
    drop(system);
    let sensitivity = if config.sensitivity {
        let p = point.global.order().max(point.local_order);
        let table = quadrature_sensitivity(&model, p + 1..=p + 10, &spec.problem, &CgSettings::default())?;
        output::write_sensitivity(&dir.join(format!("{key}_sensitivity.csv")), &table)?;
        Some(table)
    } else {
        None
    };

    // Large arrays already have their own CSV files.
    result.solve.history.clear();
    result.error.elements.clear();
    let row = SeriesRow::of(&result);
    let record = Record { point, row: &row, result: &result, sensitivity: sensitivity.as_ref() };
    output::write_atomic(record_path, &serde_json::to_vec_pretty(&record)?)?;
    Ok(row)
}
