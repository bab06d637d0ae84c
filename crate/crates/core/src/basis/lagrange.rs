use super::{Eval1D, MAX_ORDER};
use crate::error::{Error, Result};

/// Lagrange polynomials of order `p` on the parent interval `[-1, 1]` with
/// equally spaced nodes `-1 = s_0 < ... < s_p = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis1D {
    order: usize,
    nodes: Vec<f64>,
}

impl LagrangeBasis1D {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::UnsupportedBasisOrder { family: "Lagrange", order });
        }
        let nodes = (0..=order)
            .map(|i| -1.0 + 2.0 * i as f64 / order as f64)
            .collect();
        Ok(Self { order, nodes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values and derivatives of all `p + 1` polynomials at `xi`.
    pub fn eval(&self, xi: f64) -> Result<Eval1D> {
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::OutOfParentDomain(xi));
        }
        Ok(self.eval_unchecked(xi))
    }

    pub(crate) fn eval_unchecked(&self, xi: f64) -> Eval1D {
        let n = self.order + 1;
        let s = &self.nodes;
        let mut out = Eval1D::new(0, n);
        for i in 0..n {
            let mut value = 1.0;
            let mut derivative = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                let denom = s[i] - s[j];
                // Product rule, accumulated factor by factor.
                derivative = derivative * (xi - s[j]) / denom + value / denom;
                value *= (xi - s[j]) / denom;
            }
            out.values[i] = value;
            out.derivatives[i] = derivative;
        }
        out
    }
}
