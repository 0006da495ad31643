//! Eigendecomposition of graph operators with reproducible conventions, and
//! the graph Fourier transform built on it.
//!
//! Conventions fixed here so that every figure and test is reproducible:
//!
//! * eigenvalues ascending, ties kept in solver order (stable sort);
//! * eigenvalues within [`Scalar::zero_eigenvalue_tolerance`] of zero are
//!   clamped to exactly `0`;
//! * in each eigenvector the entry of largest magnitude is positive; when
//!   several entries share that magnitude the smallest vertex index decides.
//!
//! No attempt is made to canonicalise the basis inside a repeated
//! eigenspace; only the eigenspace projector is reproducible there.

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, OperatorKind, Signal};
use crate::linalg::{symmetric_eigen, TotalCmp};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::scalar::Scalar;

/// Ascending eigenvalues and orthonormal eigenvectors of a graph operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    operator: OperatorKind,
    eigvals: Vec<T>,
    /// Column `k` is `u_k`.
    basis: DenseMatrix<T>,
}

impl<T: Scalar> Spectrum<T> {
    /// Builds the requested operator of `g` and decomposes it.
    pub fn of(g: &Graph<T>, operator: OperatorKind) -> Result<Self> {
        eigendecompose(&operator.matrix(g)?, operator)
    }

    pub fn operator(&self) -> OperatorKind {
        self.operator
    }

    pub fn n(&self) -> usize {
        self.eigvals.len()
    }

    pub fn eigvals(&self) -> &[T] {
        &self.eigvals
    }

    /// `U`, with `u_k` in column `k`.
    pub fn basis(&self) -> &DenseMatrix<T> {
        &self.basis
    }

    /// `u_k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<T> {
        self.basis.column(k)
    }

    /// Largest eigenvalue (zero for an empty spectrum).
    pub fn lambda_max(&self) -> T {
        self.eigvals.last().copied().unwrap_or_else(T::zero)
    }

    /// `x_hat = U^T x`.
    pub fn gft(&self, x: &[T]) -> Result<Signal<T>> {
        Ok(Signal::new(self.basis.matvec_transposed(x)?))
    }

    /// `x = U x_hat`.
    pub fn igft(&self, xhat: &[T]) -> Result<Signal<T>> {
        Ok(Signal::new(self.basis.matvec(xhat)?))
    }

    /// `f(lambda_k)` for every eigenvalue; fails on the first non-finite value.
    pub fn filter_response(&self, f: impl Fn(T) -> T) -> Result<Vec<T>> {
        self.eigvals
            .iter()
            .enumerate()
            .map(|(index, &lambda)| {
                let v = f(lambda);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteFilter {
                        index,
                        lambda: lambda.as_f64(),
                    })
                }
            })
            .collect()
    }

    /// `U diag(f(lambda)) U^T x`.
    pub fn apply_spectral_filter(&self, f: impl Fn(T) -> T, x: &[T]) -> Result<Signal<T>> {
        check_len(self.n(), x.len())?;
        let response = self.filter_response(f)?;
        let mut xhat = self.gft(x)?.into_vec();
        for (c, r) in xhat.iter_mut().zip(&response) {
            *c = *c * *r;
        }
        self.igft(&xhat)
    }

    /// `U diag(lambda) U^T`.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.basis[(i, k)] * self.eigvals[k] * self.basis[(j, k)])
                .sum()
        })
    }
}

/// Full eigendecomposition of a symmetric operator with the module's
/// ordering, clamping and sign conventions applied.
pub fn eigendecompose<T: Scalar>(m: &SymMatrix<T>, operator: OperatorKind) -> Result<Spectrum<T>> {
    let n = m.n();
    let (raw_vals, raw_vecs) = symmetric_eigen(m.as_matrix())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_vals[a].total_cmp_ref(&raw_vals[b]));

    let scale = m.as_matrix().frobenius_norm();
    let tol = T::zero_eigenvalue_tolerance(scale);
    let eigvals: Vec<T> = order
        .iter()
        .map(|&k| {
            let l = raw_vals[k];
            if l.abs() < tol {
                T::zero()
            } else {
                l
            }
        })
        .collect();

    let mut basis = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = raw_vecs.column(src);
        fix_sign(&mut col);
        for (i, v) in col.into_iter().enumerate() {
            basis[(i, dst)] = v;
        }
    }

    Ok(Spectrum {
        operator,
        eigvals,
        basis,
    })
}

/// Flips `v` so that its largest-magnitude entry is positive (first such
/// entry on ties).
pub(crate) fn fix_sign<T: Scalar>(v: &mut [T]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < T::zero()) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph<f64> {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_spectrum() {
        let s = Spectrum::of(&path3(), OperatorKind::Combinatorial).unwrap();
        let expected = [0.0, 1.0, 3.0];
        for (l, e) in s.eigvals().iter().zip(expected) {
            assert!((l - e).abs() < 1e-12, "{l} vs {e}");
        }
        assert_eq!(s.eigvals()[0], 0.0);
        let u1 = s.vector(1);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // entries 0 and 2 tie in magnitude, so vertex 0 carries the + sign
        assert!((u1[0] - r).abs() < 1e-12);
        assert!(u1[1].abs() < 1e-12);
        assert!((u1[2] + r).abs() < 1e-12);
        let u0 = s.vector(0);
        for v in u0 {
            assert!((v - 3f64.sqrt().recip()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_gives_identity_basis() {
        let s = eigendecompose(&SymMatrix::<f64>::zeros(4), OperatorKind::Combinatorial).unwrap();
        assert_eq!(s.eigvals(), &[0.0; 4]);
        assert_eq!(s.basis(), &DenseMatrix::identity(4));
    }

    #[test]
    fn normalized_k2_eigenvalues() {
        let g = Graph::<f64>::new(2, [(0, 1, 1.0)]).unwrap();
        let s = Spectrum::of(&g, OperatorKind::Normalized).unwrap();
        assert_eq!(s.eigvals()[0], 0.0);
        assert!((s.eigvals()[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn filters() {
        let g = path3();
        let s = Spectrum::of(&g, OperatorKind::Combinatorial).unwrap();
        let x = [0.3, -1.2, 2.0];
        let same = s.apply_spectral_filter(|_| 1.0, &x).unwrap();
        let lx = g.combinatorial_laplacian().matvec(&x).unwrap();
        let fl = s.apply_spectral_filter(|l| l, &x).unwrap();
        for i in 0..3 {
            assert!((same[i] - x[i]).abs() < 1e-12);
            assert!((fl[i] - lx[i]).abs() < 1e-12);
        }
        let err = s
            .apply_spectral_filter(|l| if l > 2.0 { f64::INFINITY } else { 1.0 }, &x)
            .unwrap_err();
        assert!(matches!(err, Error::NonFiniteFilter { index: 2, .. }));
        assert!(matches!(
            s.gft(&[1.0, 2.0]),
            Err(Error::LengthMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn sign_fix_ties_to_first_index() {
        let mut v = vec![-0.5, 0.5, 0.1];
        fix_sign(&mut v);
        assert_eq!(v, vec![0.5, -0.5, -0.1]);
    }
}
