//! Element loops over 3D quadrature points.
//!
//! Loads always go through here. The stiffness loop is the plain reference
//! implementation that the Kronecker route is checked against.

use super::sparse::CsrMatrix;
use crate::basis::Eval1D;
use crate::error::Result;
use crate::mesh::StructuredMesh;
use crate::quadrature::GaussRule1D;

/// `∫ f N_A` over every element of `mesh`.
pub fn load_vector(mesh: &StructuredMesh, rule: &GaussRule1D, f: &dyn Fn([f64; 3]) -> f64) -> Vec<f64> {
    let axis = mesh.axis();
    let n = mesh.dofs_per_axis();
    let jac = (0.5 * mesh.element_size()).powi(3);
    // Per element index and Gauss point: physical coordinate and 1D evaluation.
    let table: Vec<Vec<(f64, Eval1D)>> = (0..axis.n_elements())
        .map(|e| {
            rule.points()
                .iter()
                .map(|&xi| {
                    let x = axis.map(e, xi);
                    (x, axis.eval_in_element(e, x))
                })
                .collect()
        })
        .collect();
    let w = rule.weights();
    let mut out = vec![0.0; mesh.n_dofs()];
    let ne = axis.n_elements();
    for ex in 0..ne {
        for ey in 0..ne {
            for ez in 0..ne {
                for (qx, (x, bx)) in table[ex].iter().enumerate() {
                    for (qy, (y, by)) in table[ey].iter().enumerate() {
                        for (qz, (z, bz)) in table[ez].iter().enumerate() {
                            let fw = f([*x, *y, *z]) * w[qx] * w[qy] * w[qz] * jac;
                            if fw == 0.0 {
                                continue;
                            }
                            for i in 0..bx.len {
                                let vx = fw * bx.values[i];
                                for j in 0..by.len {
                                    let vxy = vx * by.values[j];
                                    let base = ((bx.first + i) * n + by.first + j) * n + bz.first;
                                    for k in 0..bz.len {
                                        out[base + k] += vxy * bz.values[k];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `∫ ∇R_A · ∇C_B` over the elements of `cells`, evaluating both function
/// sets at physical quadrature points.
pub fn stiffness_pointwise(
    rows: &StructuredMesh,
    cols: &StructuredMesh,
    cells: &StructuredMesh,
    rule: &GaussRule1D,
) -> Result<CsrMatrix> {
    let jac = (0.5 * cells.element_size()).powi(3);
    let mut triplets = Vec::new();
    for flat in 0..cells.n_elements() {
        let e = cells.element_axis_indices(flat);
        for (xi, wx) in rule.iter() {
            for (eta, wy) in rule.iter() {
                for (zeta, wz) in rule.iter() {
                    let x = cells.map_to_physical(e, [xi, eta, zeta]);
                    let w = wx * wy * wz * jac;
                    let a = rows.basis_at(x)?;
                    let b = cols.basis_at(x)?;
                    for (ma, ga) in a.gradients.iter().enumerate() {
                        let ra = rows.flat_dof(&a, ma);
                        for (mb, gb) in b.gradients.iter().enumerate() {
                            let v = w * (ga[0] * gb[0] + ga[1] * gb[1] + ga[2] * gb[2]);
                            triplets.push((ra, cols.flat_dof(&b, mb), v));
                        }
                    }
                }
            }
        }
    }
    CsrMatrix::from_triplets(rows.n_dofs(), cols.n_dofs(), triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::BasisFamily;
    use crate::quadrature::gauss_rule;

    #[test]
    fn unit_load_integrates_the_partition_of_unity() {
        for family in [BasisFamily::Lagrange(2), BasisFamily::BSpline(3)] {
            let m = StructuredMesh::new(family, 0.0, 2.0, 4).unwrap();
            let f = load_vector(&m, &gauss_rule(4).unwrap(), &|_| 1.0);
            let total: f64 = f.iter().sum();
            assert!((total - 8.0).abs() < 1e-12, "{family}: {total}");
        }
    }

    #[test]
    fn trilinear_corner_entry() {
        let m = StructuredMesh::new(BasisFamily::Lagrange(1), 0.0, 1.0, 1).unwrap();
        let k = stiffness_pointwise(&m, &m, &m, &gauss_rule(2).unwrap()).unwrap();
        assert!((k.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        // Opposite corners share only the mixed terms: -1/12.
        assert!((k.get(0, 7) + 1.0 / 12.0).abs() < 1e-15);
    }
}
