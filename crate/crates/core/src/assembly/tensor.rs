//! Stiffness blocks as Kronecker sums of 1D factors.
//!
//! On axis-aligned tensor meshes with tensor Gauss rules, a block
//! `∫ ∇N_A · ∇N_C` over a box factorizes exactly into
//! `S⊗M⊗M + M⊗S⊗M + M⊗M⊗S`, with `M` and `S` the 1D mass and derivative
//! products integrated by the same 1D rule on the same cells. The entries
//! equal those of a 3D element loop up to rounding.

use super::sparse::{CsrBuilder, CsrMatrix};
use crate::mesh::StructuredAxis;
use crate::quadrature::GaussRule1D;

/// 1D mass and stiffness between the functions of two axes, stored densely
/// with the list of structurally nonzero columns per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor1D {
    rows: usize,
    cols: usize,
    mass: Vec<f64>,
    stiffness: Vec<f64>,
    pattern: Vec<Vec<usize>>,
}

impl Factor1D {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.cols + j]
    }

    pub fn stiffness(&self, i: usize, j: usize) -> f64 {
        self.stiffness[i * self.cols + j]
    }

    pub fn pattern(&self, i: usize) -> &[usize] {
        &self.pattern[i]
    }
}

/// Integrates products of `rows` and `cols` functions element by element
/// over `cells`, with `rule` mapped onto every cell.
///
/// Both function sets are evaluated at physical points, so a Gauss point
/// that falls on an element boundary of `rows` or `cols` gets the two-sided
/// mean of that basis.
pub fn cross_1d(rows: &StructuredAxis, cols: &StructuredAxis, cells: &StructuredAxis, rule: &GaussRule1D) -> Factor1D {
    let (nr, nc) = (rows.n_dofs(), cols.n_dofs());
    let mut mass = vec![0.0; nr * nc];
    let mut stiffness = vec![0.0; nr * nc];
    let mut touched = vec![false; nr * nc];
    let half = 0.5 * cells.element_size();
    for e in 0..cells.n_elements() {
        for (xi, w) in rule.iter() {
            let x = cells.map(e, xi);
            let (Some(a), Some(b)) = (rows.eval(x), cols.eval(x)) else {
                continue;
            };
            let w = w * half;
            for (i, (va, da)) in a.indices().zip(a.values().iter().zip(a.derivatives())) {
                for (j, (vb, db)) in b.indices().zip(b.values().iter().zip(b.derivatives())) {
                    let k = i * nc + j;
                    mass[k] += w * va * vb;
                    stiffness[k] += w * da * db;
                    touched[k] = true;
                }
            }
        }
    }
    let pattern = (0..nr).map(|i| (0..nc).filter(|&j| touched[i * nc + j]).collect()).collect();
    Factor1D { rows: nr, cols: nc, mass, stiffness, pattern }
}

/// `S⊗M⊗M + M⊗S⊗M + M⊗M⊗S` with the same factor on every axis, rows and
/// columns numbered lexicographically (last axis fastest).
pub fn kronecker_laplacian(f: &Factor1D) -> CsrMatrix {
    let (nr, nc) = (f.rows, f.cols);
    let nnz: usize = {
        let per_row: Vec<usize> = f.pattern.iter().map(Vec::len).collect();
        let s: usize = per_row.iter().sum();
        s * s * s
    };
    let mut b = CsrBuilder::with_capacity(nr * nr * nr, nc * nc * nc, nnz);
    for i in 0..nr {
        for j in 0..nr {
            for k in 0..nr {
                for &a in f.pattern(i) {
                    let (mi, si) = (f.mass(i, a), f.stiffness(i, a));
                    for &bb in f.pattern(j) {
                        let (mj, sj) = (f.mass(j, bb), f.stiffness(j, bb));
                        let row_ab = (a * nc + bb) * nc;
                        for &c in f.pattern(k) {
                            let (mk, sk) = (f.mass(k, c), f.stiffness(k, c));
                            b.push(row_ab + c, si * mj * mk + mi * sj * mk + mi * mj * sk);
                        }
                    }
                }
                b.finish_row();
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::BasisFamily;
    use crate::quadrature::gauss_rule;

    #[test]
    fn linear_factor_on_one_unit_element() {
        let a = StructuredAxis::new(BasisFamily::Lagrange(1), 0.0, 1.0, 1).unwrap();
        let f = cross_1d(&a, &a, &a, &gauss_rule(2).unwrap());
        assert!((f.mass(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.mass(0, 1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((f.stiffness(0, 1) + 1.0).abs() < 1e-15);
        // Corner diagonal of the trilinear unit cube: 3 * (1 * 1/3 * 1/3).
        let k = kronecker_laplacian(&f);
        assert!((k.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(k.nrows(), 8);
        assert_eq!(k.nnz(), 64);
    }

    #[test]
    fn factor_pattern_is_banded_for_bsplines() {
        let a = StructuredAxis::new(BasisFamily::BSpline(3), 0.0, 2.0, 8).unwrap();
        let f = cross_1d(&a, &a, &a, &gauss_rule(4).unwrap());
        for i in 0..f.rows() {
            for &j in f.pattern(i) {
                assert!(i.abs_diff(j) <= 3);
            }
        }
        // Derivatives of the partition of unity vanish.
        for i in 0..f.rows() {
            let s: f64 = (0..f.cols()).map(|j| f.stiffness(i, j)).sum();
            assert!(s.abs() < 1e-13);
        }
    }
}
