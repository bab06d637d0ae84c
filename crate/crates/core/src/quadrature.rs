//! Gauss-Legendre quadrature on `[-1, 1]` and its tensor products.
//!
//! Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
//! iteration from the Chebyshev-like initial guess; the weights follow from
//! `w_i = 2 / ((1 - x_i^2) P_n'(x_i)^2)`.

use crate::error::{Error, Result};

/// Largest supported number of points.
pub const MAX_ORDER: usize = 16;

const NEWTON_TOLERANCE: f64 = 1e-15;
const NEWTON_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule1D {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule1D {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrates `f` over `[a, b]` with the affine image of the rule.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// `n`-point Gauss-Legendre rule, exact for polynomials of degree `2n - 1`.
pub fn gauss_rule(n: usize) -> Result<GaussRule1D> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(Error::UnsupportedQuadratureOrder(n));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n / 2;
    for i in 0..half {
        // i-th root from the right end, refined by Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITERATIONS {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= NEWTON_TOLERANCE {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        points[half] = 0.0;
        weights[half] = 2.0 / (dp * dp);
    }
    Ok(GaussRule1D { points, weights })
}

/// Tensor-product rule on `[-1, 1]^3`; point `(i, j, k)` is stored at
/// `(i * ny + j) * nz + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule3D {
    axes: [GaussRule1D; 3],
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl GaussRule3D {
    pub fn axes(&self) -> &[GaussRule1D; 3] {
        &self.axes
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

pub fn tensor3(rule_x: &GaussRule1D, rule_y: &GaussRule1D, rule_z: &GaussRule1D) -> GaussRule3D {
    let capacity = rule_x.order() * rule_y.order() * rule_z.order();
    let mut points = Vec::with_capacity(capacity);
    let mut weights = Vec::with_capacity(capacity);
    for (x, wx) in rule_x.iter() {
        for (y, wy) in rule_y.iter() {
            for (z, wz) in rule_z.iter() {
                points.push([x, y, z]);
                weights.push(wx * wy * wz);
            }
        }
    }
    GaussRule3D {
        axes: [rule_x.clone(), rule_y.clone(), rule_z.clone()],
        points,
        weights,
    }
}

/// Isotropic `n x n x n` rule.
pub fn isotropic3(n: usize) -> Result<GaussRule3D> {
    let rule = gauss_rule(n)?;
    Ok(tensor3(&rule, &rule, &rule))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomial_integral(k: u32) -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            2.0 / (k as f64 + 1.0)
        }
    }

    #[test]
    fn one_point_is_midpoint_rule() {
        let rule = gauss_rule(1).unwrap();
        assert_eq!(rule.points(), &[0.0]);
        assert_eq!(rule.weights(), &[2.0]);
    }

    #[test]
    fn two_point_rule_solves_moment_equations() {
        let rule = gauss_rule(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((rule.points()[0] + r).abs() < 1e-15);
        assert!((rule.points()[1] - r).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
        assert!((rule.weights()[1] - 1.0).abs() < 1e-15);
        for k in 0..4 {
            let q: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
            assert!((q - monomial_integral(k)).abs() < 1e-15);
        }
    }

    #[test]
    fn three_point_rule() {
        let rule = gauss_rule(3).unwrap();
        let r = (3.0f64 / 5.0).sqrt();
        let expected_points = [-r, 0.0, r];
        let expected_weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        for i in 0..3 {
            assert!((rule.points()[i] - expected_points[i]).abs() < 1e-15);
            assert!((rule.weights()[i] - expected_weights[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_unsupported_orders() {
        assert_eq!(gauss_rule(0), Err(Error::UnsupportedQuadratureOrder(0)));
        assert_eq!(gauss_rule(17), Err(Error::UnsupportedQuadratureOrder(17)));
    }

    #[test]
    fn invariants_hold_for_all_orders() {
        for n in 1..=MAX_ORDER {
            let rule = gauss_rule(n).unwrap();
            assert_eq!(rule.order(), n);
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-14, "n={n} weight sum {sum}");
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            for w in rule.points().windows(2) {
                assert!(w[0] < w[1]);
            }
            for i in 0..n {
                assert_eq!(rule.points()[i], -rule.points()[n - 1 - i]);
                assert!(rule.points()[i].abs() < 1.0);
            }
            for k in 0..(2 * n as u32) {
                let q: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = monomial_integral(k);
                let scale = exact.abs().max(1.0);
                assert!((q - exact).abs() <= 1e-12 * scale, "n={n} k={k} q={q} exact={exact}");
            }
        }
    }

    #[test]
    fn nodes_are_reproducible() {
        for n in 1..=MAX_ORDER {
            assert_eq!(gauss_rule(n).unwrap(), gauss_rule(n).unwrap());
        }
    }

    #[test]
    fn tensor_rule_shapes_and_weights() {
        let one = gauss_rule(1).unwrap();
        let r = tensor3(&one, &one, &one);
        assert_eq!(r.points(), &[[0.0, 0.0, 0.0]]);
        assert_eq!(r.weights(), &[8.0]);

        let r = isotropic3(2).unwrap();
        assert_eq!(r.len(), 8);
        assert!(r.weights().iter().all(|&w| (w - 1.0).abs() < 1e-15));

        let q: f64 = r.iter().map(|(p, w)| w * (p[0] * p[1] * p[2]).powi(2)).sum();
        assert!((q - 8.0 / 27.0).abs() < 1e-15);

        let two = gauss_rule(2).unwrap();
        let three = gauss_rule(3).unwrap();
        let five = gauss_rule(5).unwrap();
        let r = tensor3(&two, &three, &five);
        assert_eq!(r.len(), 30);
        let sum: f64 = r.weights().iter().sum();
        assert!((sum - 8.0).abs() < 1e-12);
        assert_eq!(r.weights()[(1 * 3 + 2) * 5 + 4], two.weights()[1] * three.weights()[2] * five.weights()[4]);
    }

    #[test]
    fn integrate_on_interval() {
        let rule = gauss_rule(3).unwrap();
        let q = rule.integrate(1.0, 3.0, |x| x.powi(5));
        assert!((q - (3f64.powi(6) - 1.0) / 6.0).abs() < 1e-11);
    }
}
