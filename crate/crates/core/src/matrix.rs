//! Dense row-major matrices of `f64` weights.
//!
//! Deliberately minimal: the transforms in this crate operate on small dense
//! matrices, so there is no sparse storage and no BLAS backend. All entries
//! are required to be finite.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Dense matrix, row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<f64>,
}

impl Matrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            entries: vec![0.0; n_rows * n_cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from nested rows. Rows must be nonempty, rectangular, and finite.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        if rows.is_empty() {
            return Err(Error::Shape("matrix has no rows".into()));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::Shape("matrix has no columns".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Shape(format!(
                    "ragged rows: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n_cols
                )));
            }
            entries.extend_from_slice(row);
        }
        Matrix::from_raw(rows.len(), n_cols, entries)
    }

    /// Build from a row-major entry vector, validating shape and finiteness.
    pub fn from_raw(n_rows: usize, n_cols: usize, entries: Vec<f64>) -> Result<Self, Error> {
        if entries.len() != n_rows * n_cols {
            return Err(Error::Shape(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                n_rows,
                n_cols
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::BadWeight(*bad));
        }
        Ok(Matrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Side length of a square matrix; errors on rectangular input.
    pub fn square_size(&self) -> Result<usize, Error> {
        if self.is_square() {
            Ok(self.n_rows)
        } else {
            Err(Error::Shape(format!(
                "expected square matrix, got {}x{}",
                self.n_rows, self.n_cols
            )))
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self * rhs`. Panics if the inner dimensions disagree;
    /// shape mismatches here are programming errors, not data errors.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.n_cols, rhs.n_rows,
            "inner dimensions disagree: {}x{} * {}x{}",
            self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
        );
        let mut out = Matrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let lhs_row = i * rhs.n_cols;
                let rhs_row = k * rhs.n_cols;
                for j in 0..rhs.n_cols {
                    out.entries[lhs_row + j] += a * rhs.entries[rhs_row + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Matrix {
        let mut out = self.clone();
        for v in &mut out.entries {
            *v *= c;
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut out = self.clone();
        for (v, w) in out.entries.iter_mut().zip(&rhs.entries) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut out = self.clone();
        for (v, w) in out.entries.iter_mut().zip(&rhs.entries) {
            *v -= w;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// ∞-norm: maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n_rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `‖self − other‖_F / max(1, ‖other‖_F)`, the relative distance used by
    /// the reconstruction and oracle-agreement checks.
    pub fn relative_frobenius_distance(&self, other: &Matrix) -> f64 {
        self.sub(other).frobenius_norm() / other.frobenius_norm().max(1.0)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for i in 0..self.n_rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self[(i, j)];
            }
        }
        sums
    }

    /// Solve `self * X = I` by LU decomposition with partial pivoting.
    /// Returns the inverse together with an ∞-norm condition estimate
    /// `‖A‖_∞ · ‖A⁻¹‖_∞`.
    pub fn invert(&self) -> Result<(Matrix, f64), Error> {
        let n = self.square_size()?;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[(col, col)].abs();
            for r in col + 1..n {
                let v = lu[(r, col)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val < f64::EPSILON * self.inf_norm().max(1.0) {
                return Err(Error::IllConditionedBasis {
                    condition: f64::INFINITY,
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(col, pivot_row);
            }
            for r in col + 1..n {
                let factor = lu[(r, col)] / lu[(col, col)];
                lu[(r, col)] = factor;
                for j in col + 1..n {
                    let v = lu[(col, j)];
                    lu[(r, j)] -= factor * v;
                }
            }
        }

        // Back-substitute each permuted unit vector.
        let mut inv = Matrix::zeros(n, n);
        let mut col_buf = vec![0.0; n];
        for e in 0..n {
            for (i, x) in col_buf.iter_mut().enumerate() {
                *x = if perm[i] == e { 1.0 } else { 0.0 };
            }
            for i in 0..n {
                for k in 0..i {
                    col_buf[i] -= lu[(i, k)] * col_buf[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    col_buf[i] -= lu[(i, k)] * col_buf[k];
                }
                col_buf[i] /= lu[(i, i)];
            }
            for (i, x) in col_buf.iter().enumerate() {
                inv[(i, e)] = *x;
            }
        }

        let condition = self.inf_norm() * inv.inf_norm();
        Ok((inv, condition))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.n_cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_against_hand_computation() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.entries(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn inf_norm_is_max_row_sum() {
        let m = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 0.25]]).unwrap();
        assert_eq!(m.inf_norm(), 3.0);
    }

    #[test]
    fn rejects_non_finite() {
        let err = Matrix::from_rows(&[vec![1.0, f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::BadWeight(_)));
    }

    #[test]
    fn rejects_ragged() {
        let err = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn invert_roundtrip() {
        let a = Matrix::from_rows(&[vec![4.0, 3.0], vec![6.0, 3.0]]).unwrap();
        let (inv, cond) = a.invert().unwrap();
        let prod = a.mul(&inv);
        assert!(prod.relative_frobenius_distance(&Matrix::identity(2)) < 1e-14);
        assert!(cond >= 1.0);
    }

    #[test]
    fn invert_singular_fails() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(a.invert(), Err(Error::IllConditionedBasis { .. })));
    }
}
