//! Compressed-row storage for complex Hermitian operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A sparse complex matrix in CSR form, used for Hermitian many-body operators.
///
/// Entries are kept sorted by column within each row and duplicate
/// coordinates are summed at construction time.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl HermitianOperator {
    /// Builds an operator from `(row, col, value)` triplets. Duplicates are summed
    /// and entries that cancel to exactly zero are dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: r.max(c) + 1,
            });
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());

        for (r, c, v) in triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), col_idx.last()) {
                if lr == r && lc == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            col_idx.push(c);
            values.push(v);
        }

        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(col_idx).zip(values) {
            if v != Complex64::new(0.0, 0.0) {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }

        Ok(Self {
            dim,
            row_ptr,
            col_idx: keep_cols,
            values: keep_vals,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim).collect(),
            values: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates over stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    /// Returns the stored entry at `(row, col)` or zero.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let span = &self.col_idx[self.row_ptr[row]..self.row_ptr[row + 1]];
        match span.binary_search(&col) {
            Ok(k) => self.values[self.row_ptr[row] + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `y = H x`
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(x, &mut y);
        y
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.dim];
        for (_, c, v) in self.entries() {
            cols[c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `H - H†`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// True when every stored value has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let triplets = self
            .entries()
            .map(|(r, c, v)| (r, c, v * a))
            .chain(other.entries().map(|(r, c, v)| (r, c, v * b)))
            .collect();
        Self::from_triplets(self.dim, triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_cancellations_dropped() {
        let op = HermitianOperator::from_triplets(
            2,
            vec![
                (0, 1, c(1.0, 0.0)),
                (0, 1, c(0.5, 0.0)),
                (1, 1, c(2.0, 0.0)),
                (1, 1, c(-2.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 1), c(1.5, 0.0));
        assert_eq!(op.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn out_of_range_triplet_is_rejected() {
        let err = HermitianOperator::from_triplets(2, vec![(2, 0, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn apply_matches_dense() {
        let op = HermitianOperator::from_triplets(
            3,
            vec![
                (0, 0, c(1.0, 0.0)),
                (0, 2, c(0.0, -1.0)),
                (2, 0, c(0.0, 1.0)),
                (1, 1, c(-3.0, 0.0)),
            ],
        )
        .unwrap();
        let x = vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.25, 1.0)];
        let y = op.mul_vec(&x);
        let dense = op.to_dense() * nalgebra::DVector::from_vec(x);
        for (a, b) in y.iter().zip(dense.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(op.hermiticity_residual(), 0.0);
        assert!(!op.is_real());
        assert_eq!(op.norm_one(), 3.0);
    }
}
