use super::{Eval1D, MAX_ORDER};
use crate::error::{Error, Result};

/// Open knot vector with simple, uniformly spaced interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    order: usize,
    knots: Vec<f64>,
}

impl KnotVector {
    /// Validates an explicit knot list.
    pub fn new(order: usize, knots: Vec<f64>) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::UnsupportedBasisOrder { family: "B-spline", order });
        }
        let p = order;
        let m = knots.len();
        if m < 2 * (p + 1) {
            return Err(Error::InvalidKnotVector(format!(
                "{m} knots cannot form an open vector of order {p}"
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKnotVector("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnotVector("knots must be non-decreasing".into()));
        }
        let (lo, hi) = (knots[0], knots[m - 1]);
        if lo >= hi {
            return Err(Error::InvalidKnotVector("empty parametric interval".into()));
        }
        let open_start = knots[..=p].iter().all(|&k| k == lo) && knots[p + 1] > lo;
        let open_end = knots[m - 1 - p..].iter().all(|&k| k == hi) && knots[m - 2 - p] < hi;
        if !open_start || !open_end {
            return Err(Error::InvalidKnotVector(format!(
                "end knots must repeat exactly {} times",
                p + 1
            )));
        }
        let distinct = &knots[p..m - p];
        if distinct.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidKnotVector("interior knots must be simple".into()));
        }
        let h = (hi - lo) / (distinct.len() - 1) as f64;
        if distinct
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-10 * h)
        {
            return Err(Error::InvalidKnotVector("interior knots must be uniform".into()));
        }
        Ok(Self { order, knots })
    }

    /// Open uniform knot vector over `[lo, hi]` with `spans` knot spans.
    pub fn open_uniform(order: usize, lo: f64, hi: f64, spans: usize) -> Result<Self> {
        if spans == 0 || !(hi > lo) {
            return Err(Error::InvalidKnotVector(format!(
                "cannot build {spans} spans over [{lo}, {hi}]"
            )));
        }
        let h = (hi - lo) / spans as f64;
        let mut knots = vec![lo; order + 1];
        knots.extend((1..spans).map(|i| lo + i as f64 * h));
        knots.extend(std::iter::repeat_n(hi, order + 1));
        Self::new(order, knots)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of basis functions `n = #knots - p - 1`.
    pub fn n_functions(&self) -> usize {
        self.knots.len() - self.order - 1
    }

    pub fn n_spans(&self) -> usize {
        self.n_functions() - self.order
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Greville abscissa of function `i`: the mean of knots `i+1..=i+p`.
    pub fn greville(&self, i: usize) -> f64 {
        let p = self.order;
        self.knots[i + 1..=i + p].iter().sum::<f64>() / p as f64
    }

    /// Knot index `s` with `knots[s] <= xi < knots[s + 1]`; the last span is
    /// closed on the right.
    pub fn span_of(&self, xi: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&xi) {
            return Err(Error::OutOfParametricDomain { value: xi, lo, hi });
        }
        let p = self.order;
        let n = self.n_functions();
        if xi >= self.knots[n] {
            return Ok(n - 1);
        }
        // Last knot in [p, n) that is <= xi.
        let offset = self.knots[p..n].partition_point(|&k| k <= xi);
        Ok(p + offset - 1)
    }
}

/// Nonzero B-spline values of degree `degree` on knot span `span`
/// (functions `span - degree ..= span`), by the Cox-de Boor triangle.
fn nonzero_values(knots: &[f64], span: usize, xi: f64, degree: usize) -> [f64; MAX_ORDER + 1] {
    let mut n = [0.0; MAX_ORDER + 1];
    let mut left = [0.0; MAX_ORDER + 1];
    let mut right = [0.0; MAX_ORDER + 1];
    n[0] = 1.0;
    for j in 1..=degree {
        left[j] = xi - knots[span + 1 - j];
        right[j] = knots[span + j] - xi;
        let mut saved = 0.0;
        for r in 0..j {
            let denom = right[r + 1] + left[j - r];
            let temp = if denom == 0.0 { 0.0 } else { n[r] / denom };
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// B-spline basis over a [`KnotVector`]. Evaluation is stateless.
#[derive(Debug, Clone, PartialEq)]
pub struct BSplineBasis1D {
    knots: KnotVector,
}

impl BSplineBasis1D {
    pub fn new(knots: KnotVector) -> Self {
        Self { knots }
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.knots.order()
    }

    pub fn n_functions(&self) -> usize {
        self.knots.n_functions()
    }

    /// The `p + 1` possibly nonzero functions at `xi` with their derivatives.
    pub fn eval(&self, xi: f64) -> Result<Eval1D> {
        let span = self.knots.span_of(xi)?;
        Ok(self.eval_in_span(span, xi))
    }

    /// Evaluates the polynomial pieces belonging to knot span `span`; `xi`
    /// may sit on either end of the span.
    pub fn eval_in_span(&self, span: usize, xi: f64) -> Eval1D {
        let p = self.knots.order();
        let t = &self.knots.knots;
        let values = nonzero_values(t, span, xi, p);
        let mut out = Eval1D::new(span - p, p + 1);
        out.values[..=p].copy_from_slice(&values[..=p]);

        // dN_{i,p} = p/(t_{i+p} - t_i) N_{i,p-1} - p/(t_{i+p+1} - t_{i+1}) N_{i+1,p-1}
        let lower = nonzero_values(t, span, xi, p - 1);
        let pf = p as f64;
        for r in 0..=p {
            let i = span - p + r;
            let mut d = 0.0;
            if r >= 1 {
                let denom = t[i + p] - t[i];
                if denom != 0.0 {
                    d += pf / denom * lower[r - 1];
                }
            }
            if r < p {
                let denom = t[i + p + 1] - t[i + 1];
                if denom != 0.0 {
                    d -= pf / denom * lower[r];
                }
            }
            out.derivatives[r] = d;
        }
        out
    }

    /// Every function value at `xi` by the plain recursion over all `n`
    /// functions. Quadratic cost; meant for checking the local algorithm.
    pub fn eval_all(&self, xi: f64) -> Result<Vec<f64>> {
        let span = self.knots.span_of(xi)?;
        let t = &self.knots.knots;
        let p = self.knots.order();
        let n_knots = t.len();
        // Degree-0 functions, with the closed last span convention.
        let mut values: Vec<f64> = (0..n_knots - 1)
            .map(|i| if i == span { 1.0 } else { 0.0 })
            .collect();
        for degree in 1..=p {
            let next: Vec<f64> = (0..n_knots - 1 - degree)
                .map(|i| {
                    let mut v = 0.0;
                    let d1 = t[i + degree] - t[i];
                    if d1 != 0.0 {
                        v += (xi - t[i]) / d1 * values[i];
                    }
                    let d2 = t[i + degree + 1] - t[i + 1];
                    if d2 != 0.0 {
                        v += (t[i + degree + 1] - xi) / d2 * values[i + 1];
                    }
                    v
                })
                .collect();
            values = next;
        }
        Ok(values)
    }
}
