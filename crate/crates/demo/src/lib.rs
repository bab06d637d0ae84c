//! Browser demo: 1D basis plots, coupling-integral accuracy against the Gauss
//! order, and a small 3D solve with an error slice.
//!
//! The computations are plain functions so they can be tested natively; the
//! `wasm_bindgen` wrappers at the bottom only parse arguments and serialize
//! the results to JSON.

use bsfem::assembly::{assemble_system, coupling_stiffness_1d, Route};
use bsfem::mesh::{BasisFamily, Case, StructuredAxis, SuperposedModel};
use bsfem::quadrature::gauss_rule;
use bsfem::solver::{cg_solve, CgSettings};
use bsfem::verify::{l2_error, ManufacturedCase};
use bsfem::Result;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, Serialize)]
pub struct Curves {
    pub x: Vec<f64>,
    /// `values[i][s]`: function `i` at sample `s`.
    pub values: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    pub knots: Vec<f64>,
}

/// Every 1D basis function of `family` on `[0, 1]` split into `elements`
/// elements, sampled at `samples` points.
pub fn basis_curves(family: BasisFamily, elements: usize, samples: usize) -> Result<Curves> {
    let axis = StructuredAxis::new(family, 0.0, 1.0, elements)?;
    let n = axis.n_dofs();
    let samples = samples.max(2);
    let x: Vec<f64> = (0..samples).map(|s| s as f64 / (samples - 1) as f64).collect();
    let mut values = vec![vec![0.0; samples]; n];
    let mut derivatives = vec![vec![0.0; samples]; n];
    for (s, &xs) in x.iter().enumerate() {
        let e = axis.eval(xs).expect("sample inside the axis");
        for (m, i) in e.indices().enumerate() {
            values[i][s] = e.values()[m];
            derivatives[i][s] = e.derivatives()[m];
        }
    }
    let knots = (0..=elements).map(|k| k as f64 / elements as f64).collect();
    Ok(Curves { x, values, derivatives, knots })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadraturePoint {
    pub points: usize,
    /// Largest entry error divided by the largest entry.
    pub relative_error: f64,
}

/// `∫ N_A' M_C'` on a local axis overlapping the global one, integrated
/// exactly by splitting at every breakpoint of both axes.
fn exact_coupling(global: &StructuredAxis, local: &StructuredAxis) -> Vec<Vec<f64>> {
    let mut cuts: Vec<f64> = (0..=global.n_elements()).map(|e| global.element_start(e)).collect();
    cuts.extend((0..=local.n_elements()).map(|e| local.element_start(e)));
    cuts.retain(|&c| c >= local.lo() && c <= local.hi());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    // Both integrand factors are polynomials of degree <= 2 on each piece.
    let rule = gauss_rule(4).expect("valid order");
    let mut k = vec![vec![0.0; local.n_dofs()]; global.n_dofs()];
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let (eg, _) = global.locate(mid).expect("inside global axis");
        let (el, _) = local.locate(mid).expect("inside local axis");
        let half = 0.5 * (w[1] - w[0]);
        for (xi, wt) in rule.iter() {
            let x = mid + half * xi;
            let g = global.eval_in_element(eg, x);
            let l = local.eval_in_element(el, x);
            for (a, i) in g.indices().enumerate() {
                for (c, j) in l.indices().enumerate() {
                    k[i][j] += wt * half * g.derivatives()[a] * l.derivatives()[c];
                }
            }
        }
    }
    k
}

/// Relative error of the Gauss-integrated 1D coupling block for each order
/// `1..=max_points`, with the local element size a fraction `den / num` of
/// the global one and `local_order` local basis.
pub fn coupling_quadrature_error(
    family: BasisFamily,
    local_order: usize,
    ratio: (usize, usize),
    max_points: usize,
) -> Result<Vec<QuadraturePoint>> {
    let (num, den) = ratio;
    if num == 0 || den == 0 {
        return Err(bsfem::Error::Config("ratio terms must be positive".into()));
    }
    let global = StructuredAxis::new(family, 0.0, 1.0, den)?;
    let local = StructuredAxis::new(BasisFamily::Lagrange(local_order), 0.0, 1.0, num)?;
    let exact = exact_coupling(&global, &local);
    let scale = exact.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    (1..=max_points.min(bsfem::quadrature::MAX_ORDER))
        .map(|n| {
            let got = coupling_stiffness_1d(&global, &local, &gauss_rule(n)?);
            let err = got.iter().flatten().zip(exact.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            Ok(QuadraturePoint { points: n, relative_error: err / scale })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveView {
    pub l2_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub dofs: usize,
    pub quadrature_points: usize,
    /// Upper corner of the local box (it starts at the origin).
    pub local_hi: f64,
    pub resolution: usize,
    /// `|u_h - u|` on the plane `z = slice_z`, row-major in `y` then `x`, over `[0, 2]^2`.
    pub error: Vec<f64>,
    pub max_error: f64,
}

pub const MAX_DEMO_ELEMENTS: usize = 9;

/// Solves the sine problem on a small mesh and samples the pointwise error on
/// one `z` plane.
pub fn solve_with_slice(
    family: BasisFamily,
    local_order: usize,
    case: Case,
    elements: usize,
    slice_z: f64,
    resolution: usize,
) -> Result<SolveView> {
    if elements > MAX_DEMO_ELEMENTS {
        return Err(bsfem::Error::Config(format!("at most {MAX_DEMO_ELEMENTS} elements per axis in the browser")));
    }
    let model = SuperposedModel::for_case(family, elements, local_order, case)?;
    let problem = ManufacturedCase::Sine;
    let points = case.quadrature_points(family.order(), local_order);
    let system = assemble_system(&model, points, &problem, Route::Tensor)?;
    let (d, report) = cg_solve(&system.matrix, &system.rhs, &CgSettings::default())?;
    let (g, l) = system.partition.expand(&d);
    let eps = l2_error(&model, &g, &l, &problem, None, false)?.relative;

    let local = model.local();
    let resolution = resolution.clamp(2, 200);
    let z = slice_z.clamp(0.0, 2.0);
    let mut error = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let x = [2.0 * (i as f64 + 0.5) / resolution as f64, 2.0 * (j as f64 + 0.5) / resolution as f64, z];
            let mut u = model.global().field_at(&g, x)?;
            if x.iter().all(|&c| c <= local.hi()) {
                u += local.field_at(&l, x)?;
            }
            error.push((u - problem.exact(x)).abs());
        }
    }
    let max_error = error.iter().copied().fold(0.0, f64::max);
    Ok(SolveView {
        l2_error: eps,
        iterations: report.iterations,
        converged: report.converged,
        dofs: system.partition.dim(),
        quadrature_points: points,
        local_hi: local.hi(),
        resolution,
        error,
        max_error,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsValue> {
    match r {
        Ok(v) => serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string())),
        Err(e) => Err(JsValue::from_str(&e.to_string())),
    }
}

fn family(s: &str) -> Result<BasisFamily> {
    s.parse()
}

/// JSON [`Curves`] for a family such as `bspline:3`.
#[wasm_bindgen(js_name = basisCurves)]
pub fn basis_curves_js(family_name: &str, elements: usize, samples: usize) -> std::result::Result<String, JsValue> {
    to_js(family(family_name).and_then(|f| basis_curves(f, elements, samples)))
}

/// JSON list of [`QuadraturePoint`].
#[wasm_bindgen(js_name = couplingQuadratureError)]
pub fn coupling_quadrature_error_js(
    family_name: &str,
    local_order: usize,
    num: usize,
    den: usize,
    max_points: usize,
) -> std::result::Result<String, JsValue> {
    to_js(family(family_name).and_then(|f| coupling_quadrature_error(f, local_order, (num, den), max_points)))
}

/// JSON [`SolveView`].
#[wasm_bindgen(js_name = solveWithSlice)]
pub fn solve_with_slice_js(
    family_name: &str,
    local_order: usize,
    case: &str,
    elements: usize,
    slice_z: f64,
    resolution: usize,
) -> std::result::Result<String, JsValue> {
    to_js(
        family(family_name)
            .and_then(|f| Ok((f, case.parse::<Case>()?)))
            .and_then(|(f, c)| solve_with_slice(f, local_order, c, elements, slice_z, resolution)),
    )
}
