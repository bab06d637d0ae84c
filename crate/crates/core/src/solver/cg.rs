use serde::{Deserialize, Serialize};

use crate::assembly::SymmetricSparseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preconditioner {
    None,
    /// Jacobi scaling by `diag(K)`.
    #[default]
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgSettings {
    /// Stop when `‖F - K d‖₂ / ‖F‖₂` reaches this.
    pub tolerance: f64,
    /// `None` means the system dimension.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
    /// Stop at the first `pᵀ K p < 0` instead of stepping through it.
    #[serde(default)]
    pub stop_on_negative_curvature: bool,
}

impl Default for CgSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: None,
            preconditioner: Preconditioner::Diagonal,
            stop_on_negative_curvature: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    pub max_iterations: usize,
    /// True relative residual of the returned iterate.
    pub relative_residual: f64,
    /// `(iteration, relative residual)` of the recursively updated residual.
    pub history: Vec<(usize, f64)>,
    /// Iterations that met `pᵀ K p < 0`, proof that the matrix is not
    /// positive definite.
    pub negative_curvature: usize,
    /// Stopped on `pᵀ K p = 0`, or on a negative value when asked to.
    pub breakdown: bool,
    /// Restarts after the recursive residual drifted from the true one.
    pub restarts: usize,
    pub wall_time_s: f64,
}

/// `M⁻¹ r` with `M = diag(K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPreconditioner {
    inverse: Vec<f64>,
}

impl DiagonalPreconditioner {
    pub fn new(k: &SymmetricSparseMatrix) -> Result<Self> {
        let inverse = k
            .diagonal()
            .into_iter()
            .enumerate()
            .map(|(row, d)| if d > 0.0 && d.is_finite() { Ok(1.0 / d) } else { Err(Error::Preconditioner { row, value: d }) })
            .collect::<Result<_>>()?;
        Ok(Self { inverse })
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        for ((z, r), m) in z.iter_mut().zip(r).zip(&self.inverse) {
            *z = r * m;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// Non-convergence and breakdown are reported, not raised; the last
/// iterate is returned either way. Negative curvature is counted and, by
/// default, stepped through: CG stays well defined on an indefinite matrix
/// as long as `pᵀ K p` does not vanish.
pub fn cg_solve(k: &SymmetricSparseMatrix, f: &[f64], settings: &CgSettings) -> Result<(Vec<f64>, SolveReport)> {
    let clock = crate::util::Stopwatch::start();
    let n = k.dim();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    let max_iterations = settings.max_iterations.unwrap_or(n);
    let mut report = SolveReport {
        converged: false,
        iterations: 0,
        max_iterations,
        relative_residual: 0.0,
        history: Vec::new(),
        negative_curvature: 0,
        breakdown: false,
        restarts: 0,
        wall_time_s: 0.0,
    };
    let f_norm = norm(f);
    if !f_norm.is_finite() {
        return Err(Error::NumericalBreakdown { iteration: 0 });
    }
    let mut d = vec![0.0; n];
    if f_norm == 0.0 {
        report.converged = true;
        report.history.push((0, 0.0));
        report.wall_time_s = clock.seconds();
        return Ok((d, report));
    }
    let jacobi = match settings.preconditioner {
        Preconditioner::Diagonal => Some(DiagonalPreconditioner::new(k)?),
        Preconditioner::None => None,
    };
    let precondition = |r: &[f64], z: &mut [f64]| match &jacobi {
        Some(m) => m.apply(r, z),
        None => z.copy_from_slice(r),
    };

    let mut r = f.to_vec();
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    report.history.push((0, 1.0));

    let mut it = 0;
    while it < max_iterations {
        k.mul_vec_into(&p, &mut q);
        let pkp = dot(&p, &q);
        if !pkp.is_finite() {
            return Err(Error::NumericalBreakdown { iteration: it + 1 });
        }
        if pkp < 0.0 {
            report.negative_curvature += 1;
        }
        if pkp == 0.0 || (pkp < 0.0 && settings.stop_on_negative_curvature) {
            report.breakdown = true;
            break;
        }
        let alpha = rz / pkp;
        for i in 0..n {
            d[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        it += 1;
        let rel = norm(&r) / f_norm;
        if !rel.is_finite() {
            return Err(Error::NumericalBreakdown { iteration: it });
        }
        report.history.push((it, rel));
        if rel <= settings.tolerance {
            // Confirm with the true residual before stopping.
            k.mul_vec_into(&d, &mut q);
            for i in 0..n {
                r[i] = f[i] - q[i];
            }
            if norm(&r) / f_norm <= settings.tolerance {
                report.converged = true;
                break;
            }
            report.restarts += 1;
            precondition(&r, &mut z);
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        precondition(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    report.iterations = it;
    k.mul_vec_into(&d, &mut q);
    let true_residual: Vec<f64> = f.iter().zip(&q).map(|(a, b)| a - b).collect();
    report.relative_residual = norm(&true_residual) / f_norm;
    report.wall_time_s = clock.seconds();
    Ok((d, report))
}
