use std::io::{self, Write};

use crate::error::{Error, Result};

/// Compressed sparse rows with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    /// Sums duplicate `(row, col)` entries.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|&&(r, c, _)| r >= nrows || c >= ncols) {
            return Err(Error::Assembly(format!("entry ({r}, {c}) outside a {nrows}x{ncols} matrix")));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut b = CsrBuilder::new(nrows, ncols);
        let mut it = triplets.into_iter().peekable();
        for r in 0..nrows {
            while let Some(&(tr, c, mut v)) = it.peek() {
                if tr != r {
                    break;
                }
                it.next();
                while let Some(&(r2, c2, v2)) = it.peek() {
                    if r2 != r || c2 != c {
                        break;
                    }
                    v += v2;
                    it.next();
                }
                b.push(c, v);
            }
            b.finish_row();
        }
        Ok(b.build())
    }

    /// Dense row-major input; exact zeros are not stored.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut b = CsrBuilder::new(rows.len(), ncols);
        for row in rows {
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    b.push(c, v);
                }
            }
            b.finish_row();
        }
        b.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[range.clone()], &self.values[range])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map_or(0.0, |k| vals[k])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|r| self.get(r, r)).collect()
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            *yr = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: x.len() });
        }
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        Ok(y)
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let k = next[c];
                col_idx[k] = r;
                values[k] = v;
                next[c] += 1;
            }
        }
        Self { nrows: self.ncols, ncols: self.nrows, row_ptr, col_idx, values }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        out
    }

    /// Largest `|A_rc - A_cr|` over stored entries.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(c, r)).abs());
            }
        }
        worst
    }

    /// Matrix Market coordinate format, every stored entry written.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {:.17e}", r + 1, c + 1, v)?;
            }
        }
        Ok(())
    }
}

/// Appends rows in order; columns within a row must be pushed ascending.
#[derive(Debug)]
pub struct CsrBuilder {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        Self { nrows, ncols, row_ptr, col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, nnz: usize) -> Self {
        let mut b = Self::new(nrows, ncols);
        b.col_idx.reserve(nnz);
        b.values.reserve(nnz);
        b
    }

    pub fn push(&mut self, col: usize, value: f64) {
        debug_assert!(col < self.ncols);
        debug_assert!(self.col_idx.len() == *self.row_ptr.last().unwrap() || *self.col_idx.last().unwrap() < col);
        self.col_idx.push(col);
        self.values.push(value);
    }

    pub fn finish_row(&mut self) {
        self.row_ptr.push(self.col_idx.len());
    }

    pub fn build(self) -> CsrMatrix {
        assert_eq!(self.row_ptr.len(), self.nrows + 1, "CsrBuilder: wrong number of rows");
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr,
            col_idx: self.col_idx,
            values: self.values,
        }
    }
}

/// Square CSR matrix verified symmetric to `1e-12 * max|K|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    csr: CsrMatrix,
}

impl SymmetricSparseMatrix {
    pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

    pub fn new(csr: CsrMatrix) -> Result<Self> {
        if csr.nrows() != csr.ncols() {
            return Err(Error::DimensionMismatch { expected: csr.nrows(), found: csr.ncols() });
        }
        let defect = csr.symmetry_defect();
        if defect > Self::SYMMETRY_TOLERANCE * csr.max_abs() {
            return Err(Error::Assembly(format!("matrix is not symmetric (defect {defect:e})")));
        }
        Ok(Self { csr })
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CsrMatrix::from_dense(rows))
    }

    pub fn identity(n: usize) -> Self {
        let mut b = CsrBuilder::new(n, n);
        for r in 0..n {
            b.push(r, 1.0);
            b.finish_row();
        }
        Self { csr: b.build() }
    }

    pub fn dim(&self) -> usize {
        self.csr.nrows()
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.csr
    }
}

impl std::ops::Deref for SymmetricSparseMatrix {
    type Target = CsrMatrix;

    fn deref(&self) -> &CsrMatrix {
        &self.csr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_are_summed_and_sorted() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 1.0), (0, 1, 2.0), (1, 2, 0.5), (1, 0, -1.0)]).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.row(1).0, &[0, 2]);
        assert_eq!(m.get(1, 2), 1.5);
        assert_eq!(m.get(0, 0), 0.0);
        assert!(CsrMatrix::from_triplets(2, 2, vec![(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn transpose_and_products() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0, 0.0], vec![0.0, 3.0, 4.0]]);
        let t = a.transpose();
        assert_eq!(t.to_dense(), vec![vec![1.0, 0.0], vec![2.0, 3.0], vec![0.0, 4.0]]);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert!(a.mul_vec(&[1.0]).is_err());
    }

    #[test]
    fn symmetry_is_enforced() {
        assert!(SymmetricSparseMatrix::from_dense(&[vec![4.0, 1.0], vec![1.0, 3.0]]).is_ok());
        assert!(SymmetricSparseMatrix::from_dense(&[vec![4.0, 1.0], vec![0.0, 3.0]]).is_err());
        assert_eq!(SymmetricSparseMatrix::identity(3).diagonal(), vec![1.0; 3]);
    }

    #[test]
    fn matrix_market_export() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
        let mut buf = Vec::new();
        a.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate real general");
        assert_eq!(lines[1], "2 2 2");
        assert!(lines[2].starts_with("1 1 2.0"));
    }
}
