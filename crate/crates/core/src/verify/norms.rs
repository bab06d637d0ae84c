use serde::Serialize;

use super::ManufacturedCase;
use crate::basis::Eval1D;
use crate::error::Result;
use crate::mesh::{StructuredAxis, StructuredMesh, SuperposedModel};
use crate::quadrature::gauss_rule;

/// Squared error integrated over one local element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementError {
    pub index: [usize; 3],
    pub centroid: [f64; 3],
    pub squared_error: f64,
    /// A global element face passes through this element.
    pub crossing: bool,
}

/// Relative L² error of the composed field `u^G + u^L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub relative: f64,
    /// `∫ (u^G - u)²` over global elements outside the local box.
    pub outside_squared: f64,
    /// `∫ (u^G + u^L - u)²` over local elements.
    pub inside_squared: f64,
    /// `‖u‖` over the whole domain.
    pub denominator: f64,
    pub quadrature_points: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<ElementError>,
}

impl ErrorReport {
    pub fn numerator_squared(&self) -> f64 {
        self.outside_squared + self.inside_squared
    }
}

/// Physical coordinate and evaluation of `basis` at each Gauss point of
/// each element of `cells`.
fn axis_table(cells: &StructuredAxis, basis: &StructuredAxis, points: &[f64], same: bool) -> Vec<Vec<(f64, Eval1D)>> {
    (0..cells.n_elements())
        .map(|e| {
            points
                .iter()
                .map(|&xi| {
                    let x = cells.map(e, xi);
                    let ev = if same { basis.eval_in_element(e, x) } else { basis.eval(x).expect("point inside the mesh") };
                    (x, ev)
                })
                .collect()
        })
        .collect()
}

fn tensor_sum(coeffs: &[f64], n: usize, a: &Eval1D, b: &Eval1D, c: &Eval1D) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.len {
        for j in 0..b.len {
            let base = ((a.first + i) * n + b.first + j) * n + c.first;
            let mut s = 0.0;
            for k in 0..c.len {
                s += c.values[k] * coeffs[base + k];
            }
            sum += a.values[i] * b.values[j] * s;
        }
    }
    sum
}

/// Relative L² error with the numerator split between a loop over global
/// elements outside the local box and a loop over local elements. The
/// default rule has `max order + 2` points per axis.
pub fn l2_error(
    model: &SuperposedModel,
    global_coeffs: &[f64],
    local_coeffs: &[f64],
    exact: &ManufacturedCase,
    points: Option<usize>,
    keep_elements: bool,
) -> Result<ErrorReport> {
    let (g, l) = (model.global(), model.local());
    let n_points = points.unwrap_or(g.order().max(l.order()) + 2);
    let rule = gauss_rule(n_points)?;
    let w = rule.weights();

    let g_table = axis_table(g.axis(), g.axis(), rule.points(), true);
    let ng = g.dofs_per_axis();
    let jac_g = (0.5 * g.element_size()).powi(3);
    let mut outside = 0.0;
    let mut denominator = 0.0;
    for flat in 0..g.n_elements() {
        let e = g.element_axis_indices(flat);
        let inside = model.global_element_inside(e);
        for (qx, (x, bx)) in g_table[e[0]].iter().enumerate() {
            for (qy, (y, by)) in g_table[e[1]].iter().enumerate() {
                for (qz, (z, bz)) in g_table[e[2]].iter().enumerate() {
                    let wq = w[qx] * w[qy] * w[qz] * jac_g;
                    let u = exact.exact([*x, *y, *z]);
                    denominator += wq * u * u;
                    if !inside {
                        let diff = tensor_sum(global_coeffs, ng, bx, by, bz) - u;
                        outside += wq * diff * diff;
                    }
                }
            }
        }
    }

    let l_table = axis_table(l.axis(), l.axis(), rule.points(), true);
    let lg_table = axis_table(l.axis(), g.axis(), rule.points(), false);
    let nl = l.dofs_per_axis();
    let jac_l = (0.5 * l.element_size()).powi(3);
    let mut inside = 0.0;
    let mut elements = Vec::new();
    for flat in 0..l.n_elements() {
        let e = l.element_axis_indices(flat);
        let mut element = 0.0;
        for qx in 0..n_points {
            let (x, lx) = &l_table[e[0]][qx];
            let gx = &lg_table[e[0]][qx].1;
            for qy in 0..n_points {
                let (y, ly) = &l_table[e[1]][qy];
                let gy = &lg_table[e[1]][qy].1;
                for qz in 0..n_points {
                    let (z, lz) = &l_table[e[2]][qz];
                    let gz = &lg_table[e[2]][qz].1;
                    let wq = w[qx] * w[qy] * w[qz] * jac_l;
                    let uh = tensor_sum(global_coeffs, ng, gx, gy, gz) + tensor_sum(local_coeffs, nl, lx, ly, lz);
                    let diff = uh - exact.exact([*x, *y, *z]);
                    element += wq * diff * diff;
                }
            }
        }
        inside += element;
        if keep_elements {
            elements.push(ElementError {
                index: e,
                centroid: l.element_centroid(e),
                squared_error: element,
                crossing: model.local_element_crosses(e),
            });
        }
    }

    let denominator = denominator.sqrt();
    Ok(ErrorReport {
        relative: (outside + inside).sqrt() / denominator,
        outside_squared: outside,
        inside_squared: inside,
        denominator,
        quadrature_points: n_points,
        elements,
    })
}

/// Breakpoints of both meshes along one axis inside `[lo, hi]`.
fn merged_breaks(a: &StructuredAxis, b: &StructuredAxis) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=a.n_elements()).map(|e| a.element_start(e)).collect();
    v.extend((0..=b.n_elements()).map(|e| b.element_start(e)));
    v.sort_by(f64::total_cmp);
    let tol = 1e-12 * a.element_size().min(b.element_size());
    v.dedup_by(|x, y| (*x - *y).abs() <= tol);
    v
}

/// Squared error numerator integrated in a single pass over the whole
/// domain, on the cells cut out by both meshes together, with each field
/// evaluated at physical points. Checks [`l2_error`]'s split.
pub fn l2_numerator_single_pass(
    model: &SuperposedModel,
    global_coeffs: &[f64],
    local_coeffs: &[f64],
    exact: &ManufacturedCase,
    points: usize,
) -> Result<f64> {
    let (g, l) = (model.global(), model.local());
    let rule = gauss_rule(points)?;
    let breaks = merged_breaks(g.axis(), l.axis());
    let inside_local = |x: [f64; 3]| x.iter().all(|&c| c >= l.lo() && c <= l.hi());
    let field = |m: &StructuredMesh, c: &[f64], x: [f64; 3]| m.field_at(c, x);
    let mut total = 0.0;
    let cells: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    for &(ax, bx) in &cells {
        for &(ay, by) in &cells {
            for &(az, bz) in &cells {
                let mid = [0.5 * (ax + bx), 0.5 * (ay + by), 0.5 * (az + bz)];
                let with_local = inside_local(mid);
                let jac = 0.125 * (bx - ax) * (by - ay) * (bz - az);
                for (xi, wx) in rule.iter() {
                    for (eta, wy) in rule.iter() {
                        for (zeta, wz) in rule.iter() {
                            let x = [
                                ax + 0.5 * (xi + 1.0) * (bx - ax),
                                ay + 0.5 * (eta + 1.0) * (by - ay),
                                az + 0.5 * (zeta + 1.0) * (bz - az),
                            ];
                            let mut uh = field(g, global_coeffs, x)?;
                            if with_local {
                                uh += field(l, local_coeffs, x)?;
                            }
                            let d = uh - exact.exact(x);
                            total += wx * wy * wz * jac * d * d;
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}
