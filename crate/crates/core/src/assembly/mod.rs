//! Block stiffness matrix and load vector of the superposed Poisson problem.
//!
//! The unknowns are the global coefficients followed by the local ones.
//! Global functions that touch the domain boundary take the Dirichlet data,
//! local nodes on the local box boundary are fixed to zero, and both are
//! eliminated with their known columns moved to the right-hand side.

mod dofs;
mod pointwise;
mod sparse;
mod tensor;

pub use dofs::{DofCounts, DofPartition};
pub use pointwise::{load_vector, stiffness_pointwise};
pub use sparse::{CsrBuilder, CsrMatrix, SymmetricSparseMatrix};
pub use tensor::{cross_1d, kronecker_laplacian, Factor1D};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{StructuredAxis, SuperposedModel};
use crate::quadrature::GaussRule1D;

/// Source term and Dirichlet data of `-Δu = f`.
pub trait Problem: Sync {
    fn source(&self, x: [f64; 3]) -> f64;
    fn dirichlet(&self, x: [f64; 3]) -> f64;
}

/// How stiffness blocks are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Kronecker sums of 1D factors.
    #[default]
    Tensor,
    /// Loops over 3D quadrature points.
    Pointwise,
}

/// Unconstrained blocks over all DOFs of each mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    pub kgg: CsrMatrix,
    pub kgl: CsrMatrix,
    pub kll: CsrMatrix,
    pub fg: Vec<f64>,
    pub fl: Vec<f64>,
}

/// Reduced system over the free DOFs.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: SymmetricSparseMatrix,
    pub rhs: Vec<f64>,
    pub partition: DofPartition,
}

/// `K^GG` over global elements and `∫ f N^G` over the whole domain.
pub fn assemble_kgg(
    model: &SuperposedModel,
    rule: &GaussRule1D,
    problem: &dyn Problem,
    route: Route,
) -> Result<(CsrMatrix, Vec<f64>)> {
    let g = model.global();
    let k = match route {
        Route::Tensor => kronecker_laplacian(&cross_1d(g.axis(), g.axis(), g.axis(), rule)),
        Route::Pointwise => stiffness_pointwise(g, g, g, rule)?,
    };
    Ok((k, load_vector(g, rule, &|x| problem.source(x))))
}

/// `K^LL` over local elements and `∫ f N^L` over the local box.
pub fn assemble_kll(
    model: &SuperposedModel,
    rule: &GaussRule1D,
    problem: &dyn Problem,
    route: Route,
) -> Result<(CsrMatrix, Vec<f64>)> {
    let l = model.local();
    let k = match route {
        Route::Tensor => kronecker_laplacian(&cross_1d(l.axis(), l.axis(), l.axis(), rule)),
        Route::Pointwise => stiffness_pointwise(l, l, l, rule)?,
    };
    Ok((k, load_vector(l, rule, &|x| problem.source(x))))
}

/// `K^GL`, integrated on the local elements with the global basis
/// evaluated at each local quadrature point. `K^LG` is its transpose.
pub fn assemble_coupling(model: &SuperposedModel, rule: &GaussRule1D, route: Route) -> Result<CsrMatrix> {
    let (g, l) = (model.global(), model.local());
    Ok(match route {
        Route::Tensor => kronecker_laplacian(&cross_1d(g.axis(), l.axis(), l.axis(), rule)),
        Route::Pointwise => stiffness_pointwise(g, l, l, rule)?,
    })
}

/// The 1D coupling stiffness `∫ N_A^G' N_C^L'` over the local cells, as a
/// dense `global × local` array.
pub fn coupling_stiffness_1d(global: &StructuredAxis, local: &StructuredAxis, rule: &GaussRule1D) -> Vec<Vec<f64>> {
    let f = cross_1d(global, local, local, rule);
    (0..f.rows()).map(|i| (0..f.cols()).map(|j| f.stiffness(i, j)).collect()).collect()
}

pub fn assemble_blocks(model: &SuperposedModel, rule: &GaussRule1D, problem: &dyn Problem, route: Route) -> Result<Blocks> {
    let (kgg, fg) = assemble_kgg(model, rule, problem, route)?;
    let (kll, fl) = assemble_kll(model, rule, problem, route)?;
    let kgl = assemble_coupling(model, rule, route)?;
    Ok(Blocks { kgg, kgl, kll, fg, fl })
}

/// Removes constrained rows and columns and folds the prescribed global
/// values into the load: `F^G -= K^GG g` and `F^L -= K^LG g`.
pub fn finalize_system(blocks: &Blocks, partition: DofPartition) -> Result<LinearSystem> {
    let Blocks { kgg, kgl, kll, fg, fl } = blocks;
    let ng = fg.len();
    let nl = fl.len();
    for (found, expected) in [
        (kgg.nrows(), ng),
        (kgg.ncols(), ng),
        (kgl.nrows(), ng),
        (kgl.ncols(), nl),
        (kll.nrows(), nl),
        (kll.ncols(), nl),
    ] {
        if found != expected {
            return Err(Error::DimensionMismatch { expected, found });
        }
    }
    if partition.counts().global_free + partition.counts().global_constrained != ng
        || partition.counts().local_free + partition.counts().local_constrained != nl
    {
        return Err(Error::Assembly("DOF partition does not match the assembled blocks".into()));
    }

    let klg = kgl.transpose();
    let lift = partition.global_lift();
    let lift_g = kgg.mul_vec(&lift)?;
    let lift_l = klg.mul_vec(&lift)?;

    let n = partition.dim();
    let mut b = CsrBuilder::new(n, n);
    let mut rhs = Vec::with_capacity(n);
    let push_row = |b: &mut CsrBuilder, left: (&[usize], &[f64]), right: (&[usize], &[f64])| {
        for (&c, &v) in left.0.iter().zip(left.1) {
            if let Some(col) = partition.global_row(c) {
                b.push(col, v);
            }
        }
        for (&c, &v) in right.0.iter().zip(right.1) {
            if let Some(col) = partition.local_row(c) {
                b.push(col, v);
            }
        }
        b.finish_row();
    };
    for &d in partition.global_free() {
        push_row(&mut b, kgg.row(d), kgl.row(d));
        rhs.push(fg[d] - lift_g[d]);
    }
    for &d in partition.local_free() {
        push_row(&mut b, klg.row(d), kll.row(d));
        rhs.push(fl[d] - lift_l[d]);
    }
    let matrix = SymmetricSparseMatrix::new(b.build())?;
    Ok(LinearSystem { matrix, rhs, partition })
}

/// Assembles and reduces the system with an `n_points`-point Gauss rule
/// per axis on every element of both meshes.
pub fn assemble_system(
    model: &SuperposedModel,
    n_points: usize,
    problem: &dyn Problem,
    route: Route,
) -> Result<LinearSystem> {
    let rule = crate::quadrature::gauss_rule(n_points)?;
    let blocks = assemble_blocks(model, &rule, problem, route)?;
    let partition = DofPartition::new(model, &|x| problem.dirichlet(x));
    finalize_system(&blocks, partition)
}
