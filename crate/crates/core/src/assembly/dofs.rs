use serde::Serialize;

use crate::mesh::SuperposedModel;

/// Split of the global and local DOFs into free and constrained sets, and
/// their rows in the reduced system (free global first, then free local).
#[derive(Debug, Clone, PartialEq)]
pub struct DofPartition {
    global_free: Vec<usize>,
    global_constrained: Vec<usize>,
    global_values: Vec<f64>,
    local_free: Vec<usize>,
    local_constrained: Vec<usize>,
    global_row: Vec<Option<usize>>,
    local_row: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DofCounts {
    pub global_free: usize,
    pub global_constrained: usize,
    pub local_free: usize,
    pub local_constrained: usize,
}

impl DofPartition {
    /// Global functions that do not vanish on the domain boundary carry
    /// `dirichlet` evaluated at their node or Greville point; local
    /// boundary nodes are fixed to zero.
    pub fn new(model: &SuperposedModel, dirichlet: &dyn Fn([f64; 3]) -> f64) -> Self {
        let g = model.global();
        let l = model.local();
        let mut global_free = Vec::new();
        let mut global_constrained = Vec::new();
        let mut global_values = Vec::new();
        let mut global_row = vec![None; g.n_dofs()];
        for d in 0..g.n_dofs() {
            if g.dof_axis_indices(d).iter().any(|&i| g.axis().is_end_dof(i)) {
                global_constrained.push(d);
                global_values.push(dirichlet(g.dof_coords(d)));
            } else {
                global_row[d] = Some(global_free.len());
                global_free.push(d);
            }
        }
        let offset = global_free.len();
        let mut local_free = Vec::new();
        let mut local_constrained = Vec::new();
        let mut local_row = vec![None; l.n_dofs()];
        for d in 0..l.n_dofs() {
            if l.is_boundary_node(d) {
                local_constrained.push(d);
            } else {
                local_row[d] = Some(offset + local_free.len());
                local_free.push(d);
            }
        }
        Self {
            global_free,
            global_constrained,
            global_values,
            local_free,
            local_constrained,
            global_row,
            local_row,
        }
    }

    pub fn dim(&self) -> usize {
        self.global_free.len() + self.local_free.len()
    }

    pub fn counts(&self) -> DofCounts {
        DofCounts {
            global_free: self.global_free.len(),
            global_constrained: self.global_constrained.len(),
            local_free: self.local_free.len(),
            local_constrained: self.local_constrained.len(),
        }
    }

    pub fn global_free(&self) -> &[usize] {
        &self.global_free
    }

    pub fn global_constrained(&self) -> &[usize] {
        &self.global_constrained
    }

    /// Prescribed coefficients, parallel to [`Self::global_constrained`].
    pub fn global_values(&self) -> &[f64] {
        &self.global_values
    }

    pub fn local_free(&self) -> &[usize] {
        &self.local_free
    }

    pub fn local_constrained(&self) -> &[usize] {
        &self.local_constrained
    }

    pub fn global_row(&self, dof: usize) -> Option<usize> {
        self.global_row[dof]
    }

    pub fn local_row(&self, dof: usize) -> Option<usize> {
        self.local_row[dof]
    }

    /// Full global coefficient vector with prescribed values and zeros on
    /// free DOFs.
    pub fn global_lift(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.global_row.len()];
        for (&d, &v) in self.global_constrained.iter().zip(&self.global_values) {
            out[d] = v;
        }
        out
    }

    /// Full coefficient vectors of both meshes from a reduced solution.
    pub fn expand(&self, solution: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut global = self.global_lift();
        for (row, &d) in self.global_free.iter().enumerate() {
            global[d] = solution[row];
        }
        let offset = self.global_free.len();
        let mut local = vec![0.0; self.local_row.len()];
        for (k, &d) in self.local_free.iter().enumerate() {
            local[d] = solution[offset + k];
        }
        (global, local)
    }
}
