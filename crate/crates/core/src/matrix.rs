//! Dense row-major matrices.
//!
//! Target graphs are desk-scale (a few thousand vertices at most), so every
//! operator is stored densely.

use std::ops::{Index, IndexMut};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::input(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `self^T · x`
    pub fn matvec_transposed(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.rows, x.len())?;
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * xi;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let src = other.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.rows, other.rows)?;
        check_len(self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Rows `0..count`.
    pub fn top_rows(&self, count: usize) -> Self {
        let count = count.min(self.rows);
        Self {
            rows: count,
            cols: self.cols,
            data: self.data[..count * self.cols].to_vec(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| U::lit(v.as_f64())).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Square matrix whose entries satisfy `m[i][j] == m[j][i]` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    inner: DenseMatrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Rejects matrices that are not square, not finite or not exactly symmetric.
    pub fn new(m: DenseMatrix<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::input(format!(
                "matrix is not square: {} x {}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        for i in 0..n {
            for j in 0..=i {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if !a.is_finite() {
                    return Err(Error::input(format!("entry ({i}, {j}) is not finite")));
                }
                if a != b {
                    return Err(Error::input(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { inner: m })
    }

    /// Builds a symmetric matrix from its lower triangle (`j <= i`).
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { inner: m }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DenseMatrix::zeros(n, n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn as_matrix(&self) -> &DenseMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.inner
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        self.inner.matvec(x)
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_lower(idx.len(), |a, b| self.inner[(idx[a], idx[b])])
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, ij: (usize, usize)) -> &T {
        &self.inner[ij]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap();
        assert!(matches!(SymMatrix::new(m), Err(Error::Input(_))));
    }

    #[test]
    fn matmul_and_transpose() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let ata = a.transpose().matmul(&a).unwrap();
        assert_eq!(ata.rows(), 3);
        assert_eq!(ata[(0, 0)], 17.0);
        assert_eq!(ata[(1, 2)], 2.0 * 3.0 + 5.0 * 6.0);
        assert_eq!(
            a.matvec_transposed(&[1.0, 1.0]).unwrap(),
            vec![5.0, 7.0, 9.0]
        );
    }
}
