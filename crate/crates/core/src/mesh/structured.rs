use std::ops::Deref;

use serde::Serialize;

use super::{BasisFamily, StructuredAxis};
use crate::basis::{Eval1D, TensorEval};
use crate::error::{Error, Result};

/// Cube `[lo, hi]^3` with `n` elements per axis and the same basis on
/// every axis. DOFs and elements are numbered lexicographically with the
/// last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMesh {
    axis: StructuredAxis,
}

impl StructuredMesh {
    pub fn new(family: BasisFamily, lo: f64, hi: f64, n_elements: usize) -> Result<Self> {
        Ok(Self { axis: StructuredAxis::new(family, lo, hi, n_elements)? })
    }

    pub fn axis(&self) -> &StructuredAxis {
        &self.axis
    }

    pub fn family(&self) -> BasisFamily {
        self.axis.family()
    }

    pub fn order(&self) -> usize {
        self.axis.order()
    }

    pub fn lo(&self) -> f64 {
        self.axis.lo()
    }

    pub fn hi(&self) -> f64 {
        self.axis.hi()
    }

    pub fn elements_per_axis(&self) -> usize {
        self.axis.n_elements()
    }

    pub fn n_elements(&self) -> usize {
        self.axis.n_elements().pow(3)
    }

    pub fn element_size(&self) -> f64 {
        self.axis.element_size()
    }

    pub fn dofs_per_axis(&self) -> usize {
        self.axis.n_dofs()
    }

    pub fn n_dofs(&self) -> usize {
        self.axis.n_dofs().pow(3)
    }

    pub fn dof_index(&self, ijk: [usize; 3]) -> usize {
        let n = self.axis.n_dofs();
        (ijk[0] * n + ijk[1]) * n + ijk[2]
    }

    pub fn dof_axis_indices(&self, flat: usize) -> [usize; 3] {
        let n = self.axis.n_dofs();
        [flat / (n * n), (flat / n) % n, flat % n]
    }

    pub fn dof_coords(&self, flat: usize) -> [f64; 3] {
        let c = self.axis.dof_coords();
        self.dof_axis_indices(flat).map(|i| c[i])
    }

    pub fn element_index(&self, e: [usize; 3]) -> usize {
        let n = self.axis.n_elements();
        (e[0] * n + e[1]) * n + e[2]
    }

    pub fn element_axis_indices(&self, flat: usize) -> [usize; 3] {
        let n = self.axis.n_elements();
        [flat / (n * n), (flat / n) % n, flat % n]
    }

    pub fn element_centroid(&self, e: [usize; 3]) -> [f64; 3] {
        e.map(|i| self.axis.map(i, 0.0))
    }

    /// Element indices and parent coordinates of a physical point, by
    /// `floor` and clamping per axis.
    pub fn locate(&self, x: [f64; 3]) -> Result<([usize; 3], [f64; 3])> {
        let mut e = [0; 3];
        let mut xi = [0.0; 3];
        for a in 0..3 {
            let (ea, xa) = self.axis.locate(x[a]).ok_or(Error::OutOfDomain {
                point: x,
                lo: self.lo(),
                hi: self.hi(),
            })?;
            e[a] = ea;
            xi[a] = xa;
        }
        Ok((e, xi))
    }

    pub fn map_to_physical(&self, e: [usize; 3], xi: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|a| self.axis.map(e[a], xi[a]))
    }

    /// Per-axis evaluations at a physical point, two-sided means on
    /// element faces.
    pub fn eval_axes(&self, x: [f64; 3]) -> Result<[Eval1D; 3]> {
        let out_of_domain = || Error::OutOfDomain { point: x, lo: self.lo(), hi: self.hi() };
        Ok([
            self.axis.eval(x[0]).ok_or_else(out_of_domain)?,
            self.axis.eval(x[1]).ok_or_else(out_of_domain)?,
            self.axis.eval(x[2]).ok_or_else(out_of_domain)?,
        ])
    }

    /// Supported functions at `x` with values and physical gradients. Use
    /// [`StructuredMesh::flat_dof`] to turn window entries into DOF ids.
    pub fn basis_at(&self, x: [f64; 3]) -> Result<TensorEval> {
        Ok(TensorEval::from_axes(&self.eval_axes(x)?))
    }

    pub fn flat_dof(&self, eval: &TensorEval, m: usize) -> usize {
        self.dof_index(eval.axis_indices(m))
    }

    /// Interpolates `sum_A c_A N_A(x)`.
    pub fn field_at(&self, coefficients: &[f64], x: [f64; 3]) -> Result<f64> {
        let [ex, ey, ez] = self.eval_axes(x)?;
        let n = self.dofs_per_axis();
        let mut sum = 0.0;
        for i in 0..ex.len {
            for j in 0..ey.len {
                let row = ((ex.first + i) * n + ey.first + j) * n + ez.first;
                let vxy = ex.values[i] * ey.values[j];
                for k in 0..ez.len {
                    sum += vxy * ez.values[k] * coefficients[row + k];
                }
            }
        }
        Ok(sum)
    }

    pub fn summary(&self, role: &str) -> MeshSummary {
        MeshSummary {
            role: role.to_string(),
            family: self.family().to_string(),
            lo: self.lo(),
            hi: self.hi(),
            elements_per_axis: self.elements_per_axis(),
            element_size: self.element_size(),
            dofs_per_axis: self.dofs_per_axis(),
            dofs: self.n_dofs(),
        }
    }
}

/// JSON-friendly description of a mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshSummary {
    pub role: String,
    pub family: String,
    pub lo: f64,
    pub hi: f64,
    pub elements_per_axis: usize,
    pub element_size: f64,
    pub dofs_per_axis: usize,
    pub dofs: usize,
}

/// Mesh over the whole domain: open uniform B-splines (knots at physical
/// coordinates, control points at the Greville abscissae) or Lagrange
/// hexahedra.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMesh {
    mesh: StructuredMesh,
}

pub fn build_global(family: BasisFamily, lo: f64, hi: f64, n_elements: usize) -> Result<GlobalMesh> {
    Ok(GlobalMesh { mesh: StructuredMesh::new(family, lo, hi, n_elements)? })
}

impl GlobalMesh {
    /// Same as [`StructuredMesh::locate`]; spelled out for the global mesh.
    pub fn locate_in_global(&self, x: [f64; 3]) -> Result<([usize; 3], [f64; 3])> {
        self.mesh.locate(x)
    }

    pub fn global_basis_at(&self, x: [f64; 3]) -> Result<TensorEval> {
        self.mesh.basis_at(x)
    }

    pub fn summary(&self) -> MeshSummary {
        self.mesh.summary("global")
    }
}

impl Deref for GlobalMesh {
    type Target = StructuredMesh;

    fn deref(&self) -> &StructuredMesh {
        &self.mesh
    }
}

/// Lagrange mesh over the refined sub-box.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMesh {
    mesh: StructuredMesh,
    boundary: Vec<bool>,
}

pub fn build_local(order: usize, lo: f64, hi: f64, n_elements: usize) -> Result<LocalMesh> {
    let mesh = StructuredMesh::new(BasisFamily::Lagrange(order), lo, hi, n_elements)?;
    let boundary = (0..mesh.n_dofs())
        .map(|d| mesh.dof_axis_indices(d).iter().any(|&i| mesh.axis().is_end_dof(i)))
        .collect();
    Ok(LocalMesh { mesh, boundary })
}

impl LocalMesh {
    /// Marker per node: true on the local boundary.
    pub fn boundary_markers(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary_node(&self, node: usize) -> bool {
        self.boundary[node]
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn summary(&self) -> MeshSummary {
        self.mesh.summary("local")
    }
}

impl Deref for LocalMesh {
    type Target = StructuredMesh;

    fn deref(&self) -> &StructuredMesh {
        &self.mesh
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_mesh_counts() {
        let l = build_local(1, 0.0, 1.0, 8).unwrap();
        assert_eq!(l.n_dofs(), 729);
        assert_eq!(l.element_size(), 0.125);
        let l = build_local(1, 0.0, 1.0, 12).unwrap();
        assert!((l.element_size() - 1.0 / 12.0).abs() < 1e-15);
        let l = build_local(1, 0.0, 1.0, 2).unwrap();
        assert_eq!(l.boundary_nodes().count(), 26);
        assert!(!l.is_boundary_node(l.dof_index([1, 1, 1])));
    }

    #[test]
    fn boundary_markers_match_face_coordinates() {
        let l = build_local(2, 0.0, 1.0, 3).unwrap();
        for d in 0..l.n_dofs() {
            let x = l.dof_coords(d);
            let on_face = x.iter().any(|&c| c.abs() < 1e-14 || (c - 1.0).abs() < 1e-14);
            assert_eq!(on_face, l.is_boundary_node(d));
        }
    }

    #[test]
    fn global_locate_and_map_round_trip() {
        let g = build_global(BasisFamily::BSpline(3), 0.0, 2.0, 12).unwrap();
        let (e, xi) = g.locate_in_global([0.7, 0.0, 2.0]).unwrap();
        assert_eq!(e, [4, 0, 11]);
        assert!((xi[0] + 0.6).abs() < 1e-12);
        assert_eq!(xi[1], -1.0);
        assert_eq!(xi[2], 1.0);
        let x = g.map_to_physical(e, xi);
        assert!((x[0] - 0.7).abs() < 1e-13 && x[1] == 0.0 && (x[2] - 2.0).abs() < 1e-13);
        assert!(matches!(g.locate_in_global([0.5, 2.5, 0.5]), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn summary_reports_counts() {
        let g = build_global(BasisFamily::BSpline(3), 0.0, 2.0, 12).unwrap();
        let s = g.summary();
        assert_eq!(s.dofs, 3375);
        assert_eq!(s.dofs_per_axis, 15);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"family\":\"bspline:3\""));
    }
}
