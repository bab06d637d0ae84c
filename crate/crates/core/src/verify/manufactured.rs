use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::assembly::Problem;

/// Exact solutions with their source terms. Dirichlet data is the exact
/// solution itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ManufacturedCase {
    /// `u = sin 2πx sin 2πy sin 2πz + 10`, `f = 12π² sin 2πx sin 2πy sin 2πz`.
    Sine,
    /// `u = value`, `f = 0`.
    Constant { value: f64 },
}

impl ManufacturedCase {
    pub fn exact(&self, x: [f64; 3]) -> f64 {
        match *self {
            ManufacturedCase::Sine => sines(x) + 10.0,
            ManufacturedCase::Constant { value } => value,
        }
    }

    pub fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        match *self {
            ManufacturedCase::Sine => {
                let s = x.map(|c| (2.0 * PI * c).sin());
                let c = x.map(|c| 2.0 * PI * (2.0 * PI * c).cos());
                [c[0] * s[1] * s[2], s[0] * c[1] * s[2], s[0] * s[1] * c[2]]
            }
            ManufacturedCase::Constant { .. } => [0.0; 3],
        }
    }

    pub fn source_term(&self, x: [f64; 3]) -> f64 {
        match *self {
            ManufacturedCase::Sine => 12.0 * PI * PI * sines(x),
            ManufacturedCase::Constant { .. } => 0.0,
        }
    }
}

fn sines(x: [f64; 3]) -> f64 {
    (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).sin() * (2.0 * PI * x[2]).sin()
}

/// The sine solution at a point.
pub fn exact_solution(x: [f64; 3]) -> f64 {
    ManufacturedCase::Sine.exact(x)
}

/// The sine solution's source term at a point.
pub fn source_term(x: [f64; 3]) -> f64 {
    ManufacturedCase::Sine.source_term(x)
}

impl Problem for ManufacturedCase {
    fn source(&self, x: [f64; 3]) -> f64 {
        self.source_term(x)
    }

    fn dirichlet(&self, x: [f64; 3]) -> f64 {
        self.exact(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        assert!((exact_solution([0.25; 3]) - 11.0).abs() < 1e-14);
        assert!((source_term([0.25; 3]) - 118.4352528130723).abs() < 1e-9);
        for x in [[0.0, 0.3, 0.7], [0.4, 2.0, 1.1], [1.3, 0.2, 0.0], [0.9, 1.0, 0.3]] {
            assert!((exact_solution(x) - 10.0).abs() < 1e-14, "{x:?}");
        }
    }

    #[test]
    fn source_is_minus_laplacian() {
        let h = 2e-4;
        for x in [[0.13, 0.71, 1.37], [1.9, 0.05, 0.5], [0.6, 1.2, 1.8]] {
            let u = exact_solution(x);
            let mut lap = 0.0;
            for a in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[a] += h;
                xm[a] -= h;
                lap += (exact_solution(xp) - 2.0 * u + exact_solution(xm)) / (h * h);
            }
            assert!((-lap - source_term(x)).abs() < 1e-6 * source_term(x).abs().max(1.0));
        }
    }
}
