//! Lagrange and B-spline basis functions in one and three dimensions.

mod bspline;
mod lagrange;
mod tensor;

pub use bspline::{BSplineBasis1D, KnotVector};
pub use lagrange::LagrangeBasis1D;
pub use tensor::{Basis1D, Basis3D, TensorEval};

/// Highest polynomial order supported by either family.
pub const MAX_ORDER: usize = 3;

/// Capacity of an evaluation window. A point on a shared face of two
/// Lagrange elements touches `2p + 1` functions.
pub const MAX_WINDOW: usize = 2 * MAX_ORDER + 2;

/// Values and first derivatives of the functions `first..first + len`.
/// Everything outside the window is zero at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval1D {
    pub first: usize,
    pub len: usize,
    pub values: [f64; MAX_WINDOW],
    pub derivatives: [f64; MAX_WINDOW],
}

impl Eval1D {
    pub fn new(first: usize, len: usize) -> Self {
        debug_assert!(len <= MAX_WINDOW);
        Self {
            first,
            len,
            values: [0.0; MAX_WINDOW],
            derivatives: [0.0; MAX_WINDOW],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.len]
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.derivatives[..self.len]
    }

    /// Indices of the window.
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.len
    }

    /// Scales all derivatives, e.g. by the inverse Jacobian of an affine map.
    pub fn scale_derivatives(&mut self, factor: f64) {
        for d in &mut self.derivatives[..self.len] {
            *d *= factor;
        }
    }

    /// Arithmetic mean of two evaluations, over the union of their windows.
    pub fn mean(a: &Eval1D, b: &Eval1D) -> Eval1D {
        let first = a.first.min(b.first);
        let last = (a.first + a.len).max(b.first + b.len);
        let mut out = Eval1D::new(first, last - first);
        for src in [a, b] {
            for i in 0..src.len {
                let k = src.first + i - first;
                out.values[k] += 0.5 * src.values[i];
                out.derivatives[k] += 0.5 * src.derivatives[i];
            }
        }
        out
    }
}
