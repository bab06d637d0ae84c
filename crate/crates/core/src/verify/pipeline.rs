use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{l2_error, ErrorReport, ManufacturedCase};
use crate::assembly::{assemble_system, DofCounts, LinearSystem, Route};
use crate::error::{Error, Result};
use crate::mesh::{BasisFamily, Case, MeshSummary, SuperposedModel};
use crate::solver::{cg_solve, cholesky_spd_test, CgSettings, CholeskySettings, SolveReport, SpdVerdict};
use crate::util::Stopwatch;

/// B-spline global basis (proposed) or Lagrange global basis (conventional).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Proposed,
    Conventional,
}

impl Method {
    pub fn of(family: BasisFamily) -> Self {
        if family.is_bspline() {
            Method::Proposed
        } else {
            Method::Conventional
        }
    }

    /// Global bases studied with this method.
    pub fn global_families(self) -> Vec<BasisFamily> {
        match self {
            Method::Proposed => vec![BasisFamily::BSpline(2), BasisFamily::BSpline(3)],
            Method::Conventional => (1..=3).map(BasisFamily::Lagrange).collect(),
        }
    }

    /// Checks that `family` belongs to this method.
    pub fn validate(self, family: BasisFamily) -> Result<()> {
        if self.global_families().contains(&family) {
            Ok(())
        } else {
            Err(Error::Config(format!("{self} method does not use a {family} global basis")))
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Proposed => "proposed",
            Method::Conventional => "conventional",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" | "bsfem" => Ok(Method::Proposed),
            "conventional" | "sfem" => Ok(Method::Conventional),
            _ => Err(Error::Config(format!("method must be `proposed` or `conventional`, got `{s}`"))),
        }
    }
}

/// Every (global basis, local order) pair of both methods: 6 proposed and
/// 9 conventional.
pub fn all_pairings() -> Vec<(BasisFamily, usize)> {
    [Method::Proposed, Method::Conventional]
        .into_iter()
        .flat_map(|m| m.global_families())
        .flat_map(|f| (1..=3).map(move |q| (f, q)))
        .collect()
}

/// One point of a study: mesh, case, and what to compute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub global: BasisFamily,
    pub local_order: usize,
    pub case: Case,
    pub elements: usize,
    /// Gauss points per axis; the case policy when absent.
    pub quadrature: Option<usize>,
    pub route: Route,
    pub cg: CgSettings,
    pub spd: bool,
    pub cholesky: CholeskySettings,
    pub error_points: Option<usize>,
    pub keep_element_errors: bool,
    pub problem: ManufacturedCase,
}

impl PointSpec {
    pub fn new(global: BasisFamily, local_order: usize, case: Case, elements: usize) -> Self {
        Self {
            global,
            local_order,
            case,
            elements,
            quadrature: None,
            route: Route::Tensor,
            cg: CgSettings::default(),
            spd: false,
            cholesky: CholeskySettings::default(),
            error_points: None,
            keep_element_errors: false,
            problem: ManufacturedCase::Sine,
        }
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature.unwrap_or_else(|| self.case.quadrature_points(self.global.order(), self.local_order))
    }

    pub fn model(&self) -> Result<SuperposedModel> {
        SuperposedModel::for_case(self.global, self.elements, self.local_order, self.case)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub assembly_s: f64,
    pub solve_s: f64,
    pub error_s: f64,
    pub spd_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub spec: PointSpec,
    pub method: Method,
    pub h_global: f64,
    pub h_local: f64,
    pub global_mesh: MeshSummary,
    pub local_mesh: MeshSummary,
    pub quadrature_points: usize,
    /// Dimension of the reduced system.
    pub dofs: usize,
    pub counts: DofCounts,
    pub solve: SolveReport,
    pub error: ErrorReport,
    pub spd: Option<SpdVerdict>,
    pub timings: Timings,
}

/// Assembles, solves and measures one point.
pub fn run_point(spec: &PointSpec) -> Result<PointResult> {
    let model = spec.model()?;
    let (result, _) = run_model(&model, spec)?;
    Ok(result)
}

/// As [`run_point`] on a prepared model, also returning the reduced system.
pub fn run_model(model: &SuperposedModel, spec: &PointSpec) -> Result<(PointResult, LinearSystem)> {
    let mut timings = Timings::default();
    let n_points = spec.quadrature_points();

    let clock = Stopwatch::start();
    let system = assemble_system(model, n_points, &spec.problem, spec.route)?;
    timings.assembly_s = clock.seconds();

    let clock = Stopwatch::start();
    let (solution, solve) = cg_solve(&system.matrix, &system.rhs, &spec.cg)?;
    timings.solve_s = clock.seconds();

    let clock = Stopwatch::start();
    let (global, local) = system.partition.expand(&solution);
    let error = l2_error(model, &global, &local, &spec.problem, spec.error_points, spec.keep_element_errors)?;
    timings.error_s = clock.seconds();

    let spd = if spec.spd {
        let clock = Stopwatch::start();
        let verdict = cholesky_spd_test(&system.matrix, &spec.cholesky)?;
        timings.spd_s = clock.seconds();
        Some(verdict)
    } else {
        None
    };

    let result = PointResult {
        spec: spec.clone(),
        method: Method::of(spec.global),
        h_global: model.global().element_size(),
        h_local: model.local().element_size(),
        global_mesh: model.global().summary(),
        local_mesh: model.local().summary(),
        quadrature_points: n_points,
        dofs: system.partition.dim(),
        counts: system.partition.counts(),
        solve,
        error,
        spd,
        timings,
    };
    Ok((result, system))
}
