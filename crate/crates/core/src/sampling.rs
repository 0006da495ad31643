//! Greedy sampling-set selection and bandlimited reconstruction.
//!
//! Two greedy procedures are provided:
//!
//! * **spectral proxy** — given the current set `S`, take the smallest
//!   eigenpair `(omega, phi)` of the principal submatrix of `L^p` on the
//!   complement of `S` and add the vertex where `phi^2` is largest;
//! * **sigma_min** — at step `l`, add the vertex that maximises the smallest
//!   singular value of the square submatrix of `U` on rows `S + {i}` and the
//!   first `l + 1` columns.
//!
//! Ties are broken toward the smallest vertex index. Candidates whose score
//! is within a relative `1e-9` of the best count as tied, so that symmetric
//! graphs give the same answer regardless of rounding noise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{jacobi_svd, symmetric_eigen};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::scalar::Scalar;
use crate::spectral::Spectrum;
use crate::transform::HighlightMask;

/// Default power of the operator used by the spectral proxy.
pub const DEFAULT_PROXY_ORDER: u32 = 4;

/// Relative tolerance under which two candidate scores are considered tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// Smallest singular value below which a sampled basis is rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    Proxy { order: u32 },
    SigmaMin,
}

impl Default for SamplingMethod {
    fn default() -> Self {
        SamplingMethod::Proxy {
            order: DEFAULT_PROXY_ORDER,
        }
    }
}

impl SamplingMethod {
    pub fn name(self) -> &'static str {
        match self {
            SamplingMethod::Proxy { .. } => "proxy",
            SamplingMethod::SigmaMin => "sigma_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingResult<T> {
    /// Selected vertices in selection order.
    pub order: Vec<usize>,
    /// One value per selection. For the proxy method this is
    /// `max(omega, 0)^(1/p)` of the complement the vertex was chosen from;
    /// for sigma_min it is the smallest singular value reached.
    pub objective: Vec<T>,
    pub method: SamplingMethod,
}

/// Index (into `scores`) of the best score; near-ties go to the earliest.
fn pick<T: Scalar>(scores: &[T]) -> usize {
    let best = scores.iter().copied().fold(T::neg_infinity(), T::max);
    let floor = best - best.abs() * T::lit(TIE_TOLERANCE);
    scores.iter().position(|&s| s >= floor).unwrap_or(0)
}

pub fn greedy_sample<T: Scalar>(
    s: &Spectrum<T>,
    k: usize,
    method: SamplingMethod,
) -> Result<SamplingResult<T>> {
    let n = s.n();
    if k == 0 || k > n {
        return Err(Error::input(format!("sample count {k} must be in 1..={n}")));
    }
    let (order, objective) = match method {
        SamplingMethod::Proxy { order } => proxy_greedy(s, k, order)?,
        SamplingMethod::SigmaMin => sigma_min_greedy(s, k)?,
    };
    Ok(SamplingResult {
        order,
        objective,
        method,
    })
}

fn proxy_greedy<T: Scalar>(s: &Spectrum<T>, k: usize, p: u32) -> Result<(Vec<usize>, Vec<T>)> {
    if p == 0 {
        return Err(Error::input("proxy order must be at least 1"));
    }
    let n = s.n();
    let u = s.basis();
    let powered: Vec<T> = s.eigvals().iter().map(|&l| l.powi(p as i32)).collect();
    let lp = SymMatrix::from_lower(n, |i, j| {
        (0..n)
            .map(|c| u[(i, c)] * powered[c] * u[(j, c)])
            .sum::<T>()
    });
    let inv_p = T::one() / T::lit(f64::from(p));

    let mut in_set = vec![false; n];
    let mut order = Vec::with_capacity(k);
    let mut objective = Vec::with_capacity(k);
    for _ in 0..k {
        let complement: Vec<usize> = (0..n).filter(|&i| !in_set[i]).collect();
        let sub = lp.principal_submatrix(&complement);
        let (vals, vecs) = symmetric_eigen(sub.as_matrix())?;
        let mut smallest = 0;
        for (c, &v) in vals.iter().enumerate() {
            if v < vals[smallest] {
                smallest = c;
            }
        }
        let scores: Vec<T> = (0..complement.len())
            .map(|r| vecs[(r, smallest)] * vecs[(r, smallest)])
            .collect();
        let chosen = complement[pick(&scores)];
        in_set[chosen] = true;
        order.push(chosen);
        objective.push(vals[smallest].max(T::zero()).powf(inv_p));
    }
    Ok((order, objective))
}

fn sigma_min_greedy<T: Scalar>(s: &Spectrum<T>, k: usize) -> Result<(Vec<usize>, Vec<T>)> {
    let n = s.n();
    let u = s.basis();
    let mut in_set = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut objective = Vec::with_capacity(k);
    for l in 0..k {
        let candidates: Vec<usize> = (0..n).filter(|&i| !in_set[i]).collect();
        let scores: Vec<T> = candidates
            .par_iter()
            .map(|&i| {
                let rows: Vec<usize> = order.iter().copied().chain([i]).collect();
                let sub = DenseMatrix::from_fn(l + 1, l + 1, |r, c| u[(rows[r], c)]);
                jacobi_svd(&sub).map(|svd| svd.sigma_min())
            })
            .collect::<Result<_>>()?;
        let best = pick(&scores);
        in_set[candidates[best]] = true;
        order.push(candidates[best]);
        objective.push(scores[best]);
    }
    Ok((order, objective))
}

/// Mask with `(l, order[l])` set for every selection step `l`.
pub fn highlight_from_sampling<T: Scalar>(
    r: &SamplingResult<T>,
    rows: usize,
    cols: usize,
) -> Result<HighlightMask> {
    if r.order.len() > rows {
        return Err(Error::input(format!(
            "{} selections do not fit in {rows} rows",
            r.order.len()
        )));
    }
    let mut mask = HighlightMask::new(rows, cols);
    for (l, &v) in r.order.iter().enumerate() {
        if v >= cols {
            return Err(Error::input(format!(
                "vertex {v} out of range for {cols} columns"
            )));
        }
        mask.set(l, v, true);
    }
    Ok(mask)
}

/// Least-squares fit of a signal in `span(u_0 .. u_{bandwidth-1})` to the
/// given samples.
pub fn reconstruct_bandlimited<T: Scalar>(
    s: &Spectrum<T>,
    samples: &[usize],
    values: &[T],
    bandwidth: usize,
) -> Result<Vec<T>> {
    let n = s.n();
    check_len(samples.len(), values.len())?;
    if bandwidth == 0 || bandwidth > n {
        return Err(Error::input(format!(
            "bandwidth {bandwidth} must be in 1..={n}"
        )));
    }
    if samples.len() < bandwidth {
        return Err(Error::input(format!(
            "{} samples cannot determine bandwidth {bandwidth}",
            samples.len()
        )));
    }
    if let Some(&v) = samples.iter().find(|&&v| v >= n) {
        return Err(Error::input(format!("sample vertex {v} out of range")));
    }
    let u = s.basis();
    let a = DenseMatrix::from_fn(samples.len(), bandwidth, |r, c| u[(samples[r], c)]);
    let svd = jacobi_svd(&a)?;
    let sigma_min = svd.sigma_min();
    if !(sigma_min >= T::lit(RANK_TOLERANCE)) {
        return Err(Error::IllConditioned {
            sigma_min: sigma_min.as_f64(),
        });
    }
    // c = V diag(1/sigma) U^T y
    let uty = svd.u.matvec_transposed(values)?;
    let scaled: Vec<T> = uty
        .iter()
        .zip(&svd.singular_values)
        .map(|(&x, &sv)| x / sv)
        .collect();
    let coef = svd.v.matvec(&scaled)?;
    Ok((0..n)
        .map(|v| (0..bandwidth).map(|c| u[(v, c)] * coef[c]).sum())
        .collect())
}
