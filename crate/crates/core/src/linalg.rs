//! Dense symmetric eigensolver and a one-sided Jacobi SVD.
//!
//! The eigensolver is the classic Householder tridiagonalisation followed by
//! the implicit QL iteration (Martin, Reinsch and Wilkinson). Both routines run
//! strictly sequentially, so results are bit-reproducible for a fixed input.

// Index loops mirror the published algorithms line for line.
#![allow(clippy::needless_range_loop, clippy::manual_memcpy)]

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

const MAX_QL_ITERATIONS: usize = 64;
const MAX_JACOBI_SWEEPS: usize = 80;

/// Eigenvalues (unsorted, in solver order) and eigenvectors (columns) of a
/// symmetric matrix. Only the lower triangle is read.
pub fn symmetric_eigen<T: Scalar>(a: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0, 0)));
    }
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j <= i { a[(i, j)] } else { a[(j, i)] })
                .collect()
        })
        .collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e);
    ql_implicit(&mut v, &mut d, &mut e)?;
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v[i][j]);
    Ok((d, vectors))
}

fn tridiagonalize<T: Scalar>(v: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let zero = T::zero();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for &dk in d.iter().take(i) {
            scale = scale + dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = zero;
                v[j][i] = zero;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g = g + v[k][j] * d[k];
                    e[k] = e[k] + v[k][j] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] = v[k][j] - (f * e[k] + g * d[k]);
                }
                d[j] = v[i - 1][j];
                v[i][j] = zero;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n.saturating_sub(1) {
        v[n - 1][i] = v[i][i];
        v[i][i] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] = v[k][j] - g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = zero;
    }
    v[n - 1][n - 1] = T::one();
    e[0] = zero;
}

fn ql_implicit<T: Scalar>(v: &mut [Vec<T>], d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        residual: e[l].abs().as_f64(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok(())
}

/// Thin singular value decomposition `A = U diag(s) V^T` of an `m x k`
/// matrix with `m >= k`, singular values sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: DenseMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: DenseMatrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn sigma_min(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }
}

/// One-sided (Hestenes) Jacobi SVD. Small singular values are computed to
/// high relative accuracy, which the conditioning checks rely on.
pub fn jacobi_svd<T: Scalar>(a: &DenseMatrix<T>) -> Result<Svd<T>> {
    let (m, k) = (a.rows(), a.cols());
    if m < k {
        return Err(Error::input(format!(
            "jacobi_svd needs rows >= cols, got {m} x {k}"
        )));
    }
    // work on columns
    let mut cols: Vec<Vec<T>> = (0..k).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let eps = T::epsilon();
    // columns this small are numerically zero; rotating them only churns
    // rounding noise and would prevent convergence
    let negligible = {
        let f = eps * a.frobenius_norm();
        f * f
    };
    // dot products of length m carry O(m eps) rounding
    let tol = eps * T::lit(m as f64);
    let mut converged = k < 2;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha: T = cols[p].iter().map(|&x| x * x).sum();
                let beta: T = cols[q].iter().map(|&x| x * x).sum();
                let gamma: T = cols[p].iter().zip(&cols[q]).map(|(&x, &y)| x * y).sum();
                if gamma == T::zero()
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "one-sided Jacobi SVD did not converge".into(),
        ));
    }
    let norms: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp_ref(&norms[a]).then(a.cmp(&b)));
    let u = DenseMatrix::from_fn(m, k, |i, j| {
        let src = order[j];
        if norms[src] > T::zero() {
            cols[src][i] / norms[src]
        } else {
            T::zero()
        }
    });
    let vm = DenseMatrix::from_fn(k, k, |i, j| v[order[j]][i]);
    Ok(Svd {
        u,
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        v: vm,
    })
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Solves a small dense linear system with partial pivoting.
pub fn solve<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::input("solve needs a square system"));
    }
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[x][col]
                    .abs()
                    .total_cmp_ref(&m[y][col].abs())
                    .then(y.cmp(&x))
            })
            .unwrap_or(col);
        if m[pivot][col].abs() <= T::epsilon() {
            return Err(Error::Numerical("singular linear system".into()));
        }
        m.swap(col, pivot);
        for r in (col + 1)..n {
            let factor = m[r][col] / m[col][col];
            for c in col..=n {
                let sub = factor * m[col][c];
                m[r][c] = m[r][c] - sub;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for j in (i + 1)..n {
            acc = acc - m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    Ok(x)
}

/// Total order on scalars (NaN sorts last), usable with generic `T`.
pub(crate) trait TotalCmp {
    fn total_cmp_ref(&self, other: &Self) -> std::cmp::Ordering;
}

impl<T: Scalar> TotalCmp for T {
    fn total_cmp_ref(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other)
            .unwrap_or_else(|| match (self.is_nan(), other.is_nan()) {
                (true, true) => std::cmp::Ordering::Equal,
                (true, false) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(vals: &[f64], vecs: &DenseMatrix<f64>) -> DenseMatrix<f64> {
        let n = vals.len();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| vecs[(i, k)] * vals[k] * vecs[(j, k)]).sum()
        })
    }

    #[test]
    fn eigen_of_2x2() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (mut vals, vecs) = symmetric_eigen(&a).unwrap();
        let back = reconstruct(&vals, &vecs);
        assert!(back.sub(&a).unwrap().frobenius_norm() < 1e-14);
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_of_diagonal_and_scalar() {
        let a = DenseMatrix::from_rows(&[vec![5.0]]).unwrap();
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert_eq!(vals, vec![5.0]);
        assert_eq!(vecs[(0, 0)], 1.0);

        let z = DenseMatrix::<f64>::zeros(4, 4);
        let (vals, vecs) = symmetric_eigen(&z).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));
        assert_eq!(vecs, DenseMatrix::identity(4));
    }

    #[test]
    fn svd_recovers_known_singular_values() {
        // columns scaled copies of orthonormal vectors
        let a = DenseMatrix::<f64>::from_rows(&[vec![3.0, 0.0], vec![0.0, 1e-12], vec![0.0, 0.0]])
            .unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.singular_values[0], 3.0);
        assert!((svd.sigma_min() - 1e-12).abs() < 1e-26);

        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let svd = jacobi_svd(&b).unwrap();
        let back = DenseMatrix::from_fn(3, 2, |i, j| {
            (0..2)
                .map(|k| svd.u[(i, k)] * svd.singular_values[k] * svd.v[(j, k)])
                .sum()
        });
        assert!(back.sub(&b).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn solve_small_system() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
        let x = solve(&a, &[4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }
}
