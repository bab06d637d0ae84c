use super::BasisFamily;
use crate::basis::{BSplineBasis1D, Basis1D, Eval1D, KnotVector, LagrangeBasis1D};
use crate::error::{Error, Result};

/// Relative distance (in element sizes) under which a coordinate counts as
/// lying on an element boundary.
const FACE_TOLERANCE: f64 = 1e-13;

/// A uniformly divided interval carrying one basis family; every
/// structured mesh here is the cube of one of these.
///
/// For B-splines the knots sit at physical coordinates, so the geometric
/// map is the identity and derivatives need no scaling. Lagrange elements
/// are evaluated on the parent interval with the constant factor `2 / h`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredAxis {
    family: BasisFamily,
    lo: f64,
    hi: f64,
    n_elements: usize,
    h: f64,
    basis: Basis1D,
    dof_coords: Vec<f64>,
}

impl StructuredAxis {
    pub fn new(family: BasisFamily, lo: f64, hi: f64, n_elements: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Geometry(format!("inconsistent interval [{lo}, {hi}]")));
        }
        if n_elements == 0 {
            return Err(Error::Geometry("at least one element per axis is required".into()));
        }
        let h = (hi - lo) / n_elements as f64;
        let p = family.order();
        let (basis, dof_coords) = match family {
            BasisFamily::Lagrange(_) => {
                let basis = LagrangeBasis1D::new(p)?;
                let coords = (0..=p * n_elements)
                    .map(|i| lo + (i / p) as f64 * h + (i % p) as f64 * h / p as f64)
                    .collect();
                (Basis1D::Lagrange(basis), coords)
            }
            BasisFamily::BSpline(_) => {
                if n_elements < p {
                    return Err(Error::Geometry(format!(
                        "a B-spline axis of order {p} needs at least {p} elements, got {n_elements}"
                    )));
                }
                let knots = KnotVector::open_uniform(p, lo, hi, n_elements)?;
                // Control points at the Greville abscissae reproduce the
                // identity map exactly.
                let coords = (0..knots.n_functions()).map(|i| knots.greville(i)).collect();
                (Basis1D::BSpline(BSplineBasis1D::new(knots)), coords)
            }
        };
        Ok(Self { family, lo, hi, n_elements, h, basis, dof_coords })
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.family.order()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn element_size(&self) -> f64 {
        self.h
    }

    pub fn basis(&self) -> &Basis1D {
        &self.basis
    }

    pub fn knot_vector(&self) -> Option<&KnotVector> {
        match &self.basis {
            Basis1D::BSpline(b) => Some(b.knot_vector()),
            Basis1D::Lagrange(_) => None,
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_coords.len()
    }

    /// Node coordinates (Lagrange) or control-point coordinates (B-spline).
    pub fn dof_coords(&self) -> &[f64] {
        &self.dof_coords
    }

    /// Left boundary of element `e`; `e == n_elements` gives `hi`.
    pub fn element_start(&self, e: usize) -> f64 {
        if e == self.n_elements {
            self.hi
        } else {
            self.lo + e as f64 * self.h
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let tol = FACE_TOLERANCE * 10.0 * self.h;
        x >= self.lo - tol && x <= self.hi + tol
    }

    /// Element `floor((x - lo) / h)` clamped into range, and the parent
    /// coordinate of `x` inside it. `None` outside the interval.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !self.contains(x) {
            return None;
        }
        let t = (x - self.lo) / self.h;
        let e = (t.floor().max(0.0) as usize).min(self.n_elements - 1);
        let xi = 2.0 * (x - self.lo - e as f64 * self.h) / self.h - 1.0;
        Some((e, xi.clamp(-1.0, 1.0)))
    }

    pub fn map(&self, e: usize, xi: f64) -> f64 {
        self.lo + e as f64 * self.h + 0.5 * (xi + 1.0) * self.h
    }

    /// Index `k` in `1..n_elements` when `x` sits on the boundary between
    /// elements `k - 1` and `k`.
    pub fn interior_boundary(&self, x: f64) -> Option<usize> {
        let t = (x - self.lo) / self.h;
        let k = t.round();
        if k < 1.0 || k > (self.n_elements - 1) as f64 {
            return None;
        }
        let k = k as usize;
        ((x - self.lo - k as f64 * self.h).abs() <= FACE_TOLERANCE * self.h).then_some(k)
    }

    /// Functions of element `e` at physical `x` (which must lie in the
    /// closed element), with physical derivatives.
    pub fn eval_in_element(&self, e: usize, x: f64) -> Eval1D {
        match &self.basis {
            Basis1D::Lagrange(b) => {
                let xi = (2.0 * (x - self.lo - e as f64 * self.h) / self.h - 1.0).clamp(-1.0, 1.0);
                let mut out = b.eval_unchecked(xi);
                out.first = e * b.order();
                out.scale_derivatives(2.0 / self.h);
                out
            }
            Basis1D::BSpline(b) => {
                let x = x.clamp(self.lo, self.hi);
                b.eval_in_span(e + b.order(), x)
            }
        }
    }

    /// Functions at physical `x`. On an interior element boundary the
    /// result is the mean of both one-sided evaluations: values agree
    /// there, and a derivative jump is replaced by its midpoint.
    pub fn eval(&self, x: f64) -> Option<Eval1D> {
        if let Some(k) = self.interior_boundary(x) {
            let left = self.eval_in_element(k - 1, x);
            let right = self.eval_in_element(k, x);
            return Some(Eval1D::mean(&left, &right));
        }
        let (e, _) = self.locate(x)?;
        Some(self.eval_in_element(e, x))
    }

    /// Functions with nonzero support on element `e`.
    pub fn element_dofs(&self, e: usize) -> std::ops::Range<usize> {
        let p = self.order();
        match self.family {
            BasisFamily::Lagrange(_) => e * p..e * p + p + 1,
            BasisFamily::BSpline(_) => e..e + p + 1,
        }
    }

    /// True for the first and last function, the only ones that do not
    /// vanish at the interval ends.
    pub fn is_end_dof(&self, i: usize) -> bool {
        i == 0 || i + 1 == self.n_dofs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_node_layout() {
        let a = StructuredAxis::new(BasisFamily::Lagrange(1), 0.0, 2.0, 12).unwrap();
        assert_eq!(a.n_dofs(), 13);
        for (i, x) in a.dof_coords().iter().enumerate() {
            assert!((x - i as f64 / 6.0).abs() < 1e-15);
        }
        let a = StructuredAxis::new(BasisFamily::Lagrange(3), 0.0, 1.0, 2).unwrap();
        assert_eq!(a.n_dofs(), 7);
        assert!((a.dof_coords()[4] - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn bspline_dof_count_and_greville_points() {
        let a = StructuredAxis::new(BasisFamily::BSpline(3), 0.0, 2.0, 12).unwrap();
        assert_eq!(a.n_dofs(), 15);
        assert!((a.element_size() - 0.166667).abs() < 1e-6);
        assert_eq!(a.dof_coords()[0], 0.0);
        assert_eq!(a.dof_coords()[14], 2.0);
        assert!(StructuredAxis::new(BasisFamily::BSpline(3), 0.0, 1.0, 2).is_err());
        assert!(StructuredAxis::new(BasisFamily::Lagrange(1), 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn locate_examples() {
        let a = StructuredAxis::new(BasisFamily::Lagrange(1), 0.0, 2.0, 12).unwrap();
        let (e, xi) = a.locate(0.7).unwrap();
        assert_eq!(e, 4);
        assert!((xi + 0.6).abs() < 1e-12);
        assert_eq!(a.locate(0.0), Some((0, -1.0)));
        assert_eq!(a.locate(2.0), Some((11, 1.0)));
        assert!(a.locate(2.1).is_none());
    }

    #[test]
    fn mean_evaluation_on_shared_boundary() {
        let a = StructuredAxis::new(BasisFamily::Lagrange(1), 0.0, 1.0, 2).unwrap();
        let e = a.eval(0.5).unwrap();
        assert_eq!(e.first, 0);
        assert_eq!(e.len, 3);
        assert_eq!(e.values(), &[0.0, 1.0, 0.0]);
        // Slopes -2 | 0 on the left function, 2 | -2 in the middle, 0 | 2 on the right.
        assert_eq!(e.derivatives(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn linear_precision_of_both_families() {
        for family in [
            BasisFamily::Lagrange(1),
            BasisFamily::Lagrange(3),
            BasisFamily::BSpline(2),
            BasisFamily::BSpline(3),
        ] {
            let a = StructuredAxis::new(family, -1.0, 2.0, 7).unwrap();
            for k in 0..=50 {
                let x = -1.0 + 3.0 * k as f64 / 50.0;
                let e = a.eval(x).unwrap();
                let rec: f64 = e.indices().zip(e.values()).map(|(i, v)| v * a.dof_coords()[i]).sum();
                let slope: f64 =
                    e.indices().zip(e.derivatives()).map(|(i, d)| d * a.dof_coords()[i]).sum();
                assert!((rec - x).abs() < 1e-12, "{family} at {x}: {rec}");
                assert!((slope - 1.0).abs() < 1e-12, "{family} at {x}: slope {slope}");
            }
        }
    }
}
