//! Small dense linear algebra for normal-equation systems (m up to a dozen or so).

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{max_abs, Scalar};

/// Relative pivot threshold: a pivot is singular when below this times the
/// largest absolute entry of the system matrix.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix shape does not match entry count");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `A' v`.
    pub fn t_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector length differs from row count");
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (j, o) in out.iter_mut().enumerate() {
                *o = *o + self[(i, j)] * v[i];
            }
        }
        out
    }

    /// `A' B`.
    pub fn t_mul(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut out = Self::zeros(self.cols, other.cols);
        for i in 0..self.rows {
            for a in 0..self.cols {
                let v = self[(i, a)];
                for b in 0..other.cols {
                    out[(a, b)] = out[(a, b)] + v * other[(i, b)];
                }
            }
        }
        out
    }

    /// Gram matrix `A' A`.
    pub fn gram(&self) -> Self {
        self.t_mul(self)
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.data)
    }

    /// Determinant by partial-pivoting elimination; exact zero for a zero pivot column.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())
                .unwrap();
            if a[(p, k)] == T::zero() {
                return T::zero();
            }
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            det = det * a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    a[(i, j)] = a[(i, j)] - f * a[(k, j)];
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

/// Solves `A X = B` for square `A` by Gaussian elimination with partial
/// pivoting. Fails with `SingularSystem` when a pivot falls below
/// `SINGULAR_RTOL * max|A|`.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "solve needs a square system");
    assert_eq!(n, b.rows(), "right-hand side row count differs");
    let tol = T::lit(SINGULAR_RTOL) * a.max_abs();
    let mut a = a.clone();
    let mut b = b.clone();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())
            .unwrap();
        let pivot = a[(p, k)].abs();
        if !(pivot > tol) {
            return Err(Error::SingularSystem { pivot: k });
        }
        a.swap_rows(p, k);
        b.swap_rows(p, k);
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                a[(i, j)] = a[(i, j)] - f * a[(k, j)];
            }
            for j in 0..b.cols() {
                b[(i, j)] = b[(i, j)] - f * b[(k, j)];
            }
        }
    }
    for j in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = b[(i, j)];
            for k in i + 1..n {
                s = s - a[(i, k)] * b[(k, j)];
            }
            b[(i, j)] = s / a[(i, i)];
        }
    }
    Ok(b)
}

pub fn solve_vec<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let rhs = Matrix::from_columns(&[b.to_vec()]);
    Ok(solve(a, &rhs)?.column(0))
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    solve(a, &Matrix::identity(a.rows()))
}

/// Solution of the normal equations `W'W c = W't`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalSolution<T> {
    pub coeffs: Vec<T>,
    /// `(W'W)^-1`, needed for the coefficient covariance.
    pub gram_inverse: Matrix<T>,
}

/// Least-squares solve of `W c ≈ t` through the normal equations.
pub fn solve_normal<T: Scalar>(w: &Matrix<T>, t: &[T]) -> Result<NormalSolution<T>> {
    let (n, m) = (w.rows(), w.cols());
    assert_eq!(n, t.len(), "target length differs from design rows");
    if n < m {
        return Err(Error::Underdetermined { rows: n, cols: m });
    }
    let gram = w.gram();
    let wt = w.t_mul_vec(t);
    // One elimination serves both the solve column and the identity block.
    let mut rhs = Matrix::zeros(m, m + 1);
    for i in 0..m {
        rhs[(i, 0)] = wt[i];
        rhs[(i, i + 1)] = T::one();
    }
    let x = solve(&gram, &rhs)?;
    let coeffs = x.column(0);
    let mut gram_inverse = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            gram_inverse[(i, j)] = x[(i, j + 1)];
        }
    }
    Ok(NormalSolution { coeffs, gram_inverse })
}

/// Cramer's rule for a 2x2 system.
pub fn cramer_2x2<T: Scalar>(a: [[T; 2]; 2], b: [T; 2]) -> Result<[T; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = max_abs(&[a[0][0], a[0][1], a[1][0], a[1][1]]);
    if !(det.abs() > T::lit(SINGULAR_RTOL) * scale * scale) {
        return Err(Error::SingularSystem { pivot: 1 });
    }
    Ok([
        (b[0] * a[1][1] - a[0][1] * b[1]) / det,
        (a[0][0] * b[1] - b[0] * a[1][0]) / det,
    ])
}
