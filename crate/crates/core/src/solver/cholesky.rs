use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::assembly::SymmetricSparseMatrix;
use crate::error::{Error, Result};

/// A pivot `≤ PIVOT_TOLERANCE * max diag(K)` counts as zero or negative.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Default cap on stored factor entries (about 1.2 GB).
pub const DEFAULT_ENTRY_LIMIT: usize = 150_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    Natural,
    ReverseCuthillMcKee,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CholeskySettings {
    pub ordering: Ordering,
    pub entry_limit: usize,
}

impl Default for CholeskySettings {
    fn default() -> Self {
        Self { ordering: Ordering::ReverseCuthillMcKee, entry_limit: DEFAULT_ENTRY_LIMIT }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PivotFailure {
    /// 1-based elimination step.
    pub pivot_index: usize,
    /// Row of the original matrix eliminated at that step.
    pub row: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpdVerdict {
    pub positive_definite: bool,
    pub failure: Option<PivotFailure>,
    pub threshold: f64,
    pub factor_entries: usize,
}

impl SpdVerdict {
    pub fn label(&self) -> &'static str {
        if self.positive_definite {
            "positive-definite"
        } else {
            "not-positive-definite"
        }
    }
}

/// Bandwidth-reducing order; `order[new] = old`.
pub fn reverse_cuthill_mckee(k: &SymmetricSparseMatrix) -> Vec<usize> {
    let n = k.dim();
    let degree: Vec<usize> = (0..n).map(|r| k.row(r).0.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut neighbours = Vec::new();
    while order.len() < n {
        let start = pseudo_peripheral(k, &visited, &degree);
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            neighbours.clear();
            neighbours.extend(k.row(v).0.iter().copied().filter(|&c| !visited[c]));
            neighbours.sort_by_key(|&c| (degree[c], c));
            for &c in &neighbours {
                visited[c] = true;
                queue.push_back(c);
            }
        }
    }
    order.reverse();
    order
}

/// Start node of the unvisited component holding the lowest-degree node,
/// pushed outwards by repeated breadth-first sweeps.
fn pseudo_peripheral(k: &SymmetricSparseMatrix, visited: &[bool], degree: &[usize]) -> usize {
    let mut start = (0..k.dim()).filter(|&v| !visited[v]).min_by_key(|&v| (degree[v], v)).expect("unvisited node");
    let mut depth = 0;
    for _ in 0..8 {
        let (far, d) = farthest(k, visited, degree, start);
        if d <= depth {
            break;
        }
        depth = d;
        start = far;
    }
    start
}

fn farthest(k: &SymmetricSparseMatrix, visited: &[bool], degree: &[usize], start: usize) -> (usize, usize) {
    let mut level = vec![usize::MAX; k.dim()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut best = (start, 0);
    while let Some(v) = queue.pop_front() {
        let l = level[v];
        if l > best.1 || (l == best.1 && degree[v] < degree[best.0]) {
            best = (v, l);
        }
        for &c in k.row(v).0 {
            if !visited[c] && level[c] == usize::MAX {
                level[c] = l + 1;
                queue.push_back(c);
            }
        }
    }
    best
}

/// Positive-definiteness test by Cholesky factorization `K = L Lᵀ` in
/// envelope storage. Stops at the first pivot below the threshold.
pub fn cholesky_spd_test(k: &SymmetricSparseMatrix, settings: &CholeskySettings) -> Result<SpdVerdict> {
    let n = k.dim();
    let order: Vec<usize> = match settings.ordering {
        Ordering::Natural => (0..n).collect(),
        Ordering::ReverseCuthillMcKee => reverse_cuthill_mckee(k),
    };
    let mut position = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    // Row i of the factor stores columns first[i]..=i at start[i]..start[i + 1].
    let mut first = vec![0; n];
    for (i, &old) in order.iter().enumerate() {
        first[i] = k.row(old).0.iter().map(|&c| position[c]).filter(|&c| c <= i).min().unwrap_or(i);
    }
    let mut start = vec![0usize; n + 1];
    for i in 0..n {
        start[i + 1] = start[i] + (i - first[i] + 1);
    }
    let entries = start[n];
    if entries > settings.entry_limit {
        return Err(Error::SizeLimit { required: entries, limit: settings.entry_limit });
    }
    let threshold = PIVOT_TOLERANCE * k.diagonal().into_iter().fold(0.0, f64::max);
    let mut l = vec![0.0; entries];
    for (i, &old) in order.iter().enumerate() {
        let (cols, vals) = k.row(old);
        for (&c, &v) in cols.iter().zip(vals) {
            let j = position[c];
            if j <= i {
                l[start[i] + j - first[i]] = v;
            }
        }
    }
    let mut verdict = SpdVerdict { positive_definite: true, failure: None, threshold, factor_entries: entries };
    for i in 0..n {
        let fi = first[i];
        for j in fi..i {
            let lo = fi.max(first[j]);
            let (row_i, row_j) = (start[i] + lo - fi, start[j] + lo - first[j]);
            let len = j - lo;
            let s: f64 = l[row_i..row_i + len].iter().zip(&l[row_j..row_j + len]).map(|(a, b)| a * b).sum();
            let ljj = l[start[j + 1] - 1];
            let idx = start[i] + j - fi;
            l[idx] = (l[idx] - s) / ljj;
        }
        let row = &l[start[i]..start[i + 1] - 1];
        let pivot = l[start[i + 1] - 1] - row.iter().map(|a| a * a).sum::<f64>();
        if !(pivot > threshold) {
            verdict.positive_definite = false;
            verdict.failure = Some(PivotFailure { pivot_index: i + 1, row: order[i], value: pivot });
            break;
        }
        l[start[i + 1] - 1] = pivot.sqrt();
    }
    Ok(verdict)
}
