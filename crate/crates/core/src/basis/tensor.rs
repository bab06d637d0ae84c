use super::{BSplineBasis1D, Eval1D, LagrangeBasis1D};
use crate::error::Result;

/// One axis of a tensor-product basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis1D {
    /// Evaluated on the parent interval `[-1, 1]`.
    Lagrange(LagrangeBasis1D),
    /// Evaluated in knot coordinates.
    BSpline(BSplineBasis1D),
}

impl Basis1D {
    pub fn order(&self) -> usize {
        match self {
            Basis1D::Lagrange(b) => b.order(),
            Basis1D::BSpline(b) => b.order(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<Eval1D> {
        match self {
            Basis1D::Lagrange(b) => b.eval(x),
            Basis1D::BSpline(b) => b.eval(x),
        }
    }
}

/// Values and parametric gradients of the `len[0] * len[1] * len[2]`
/// functions touching a point. Function `(i, j, k)` of the window sits at
/// `(i * len[1] + j) * len[2] + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorEval {
    pub first: [usize; 3],
    pub len: [usize; 3],
    pub values: Vec<f64>,
    pub gradients: Vec<[f64; 3]>,
}

impl TensorEval {
    pub fn from_axes(axes: &[Eval1D; 3]) -> Self {
        let [ex, ey, ez] = axes;
        let n = ex.len * ey.len * ez.len;
        let mut values = Vec::with_capacity(n);
        let mut gradients = Vec::with_capacity(n);
        for i in 0..ex.len {
            for j in 0..ey.len {
                for k in 0..ez.len {
                    let (vx, vy, vz) = (ex.values[i], ey.values[j], ez.values[k]);
                    let (dx, dy, dz) = (ex.derivatives[i], ey.derivatives[j], ez.derivatives[k]);
                    values.push(vx * vy * vz);
                    gradients.push([dx * vy * vz, vx * dy * vz, vx * vy * dz]);
                }
            }
        }
        TensorEval {
            first: [ex.first, ey.first, ez.first],
            len: [ex.len, ey.len, ez.len],
            values,
            gradients,
        }
    }

    /// Per-axis function indices of window entry `m`.
    pub fn axis_indices(&self, m: usize) -> [usize; 3] {
        let k = m % self.len[2];
        let j = (m / self.len[2]) % self.len[1];
        let i = m / (self.len[1] * self.len[2]);
        [self.first[0] + i, self.first[1] + j, self.first[2] + k]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Basis3D {
    axes: [Basis1D; 3],
}

impl Basis3D {
    pub fn new(axes: [Basis1D; 3]) -> Self {
        Self { axes }
    }

    pub fn isotropic(axis: Basis1D) -> Self {
        Self::new([axis.clone(), axis.clone(), axis])
    }

    pub fn axes(&self) -> &[Basis1D; 3] {
        &self.axes
    }

    pub fn eval(&self, point: [f64; 3]) -> Result<TensorEval> {
        let axes = [
            self.axes[0].eval(point[0])?,
            self.axes[1].eval(point[1])?,
            self.axes[2].eval(point[2])?,
        ];
        Ok(TensorEval::from_axes(&axes))
    }
}
