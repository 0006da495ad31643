//! Spectral graph wavelets: kernel design, atom synthesis, per-atom display
//! frequencies, frequency bands and Chebyshev polynomial filtering.
//!
//! The bandpass kernel is the classic cubic-spline design
//!
//! ```text
//! g(x) = (x / x1)^alpha          x < x1
//!        s(x)                    x1 <= x <= x2
//!        (x2 / x)^beta           x > x2
//! ```
//!
//! where `s` is the cubic matching value and slope of both outer pieces.
//! With the defaults (`alpha = beta = 2`, `x1 = 1`, `x2 = 2`) this gives
//! `s(x) = -5 + 11x - 6x^2 + x^3` and `max g ~ 1.3849` at `x ~ 1.4226`.
//! The scaling function is `h(x) = gamma * exp(-(x / (0.6 lambda_min))^4)`
//! with `lambda_min = lambda_max / K` and `gamma = max g`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, OperatorKind};
use crate::linalg::solve;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::spectral::Spectrum;
use crate::transform::{AtomLabel, HighlightMask, Transform};

/// Number of points of the uniform grid on `[0, lambda_max]` used for
/// frequency, band and frame-bound extraction.
pub const GRID_POINTS: usize = 1001;

/// Default number of wavelet scales.
pub const DEFAULT_SCALES: usize = 7;

/// Default ratio between the coarsest and finest scale.
pub const DEFAULT_SCALE_SPAN: f64 = 20.0;

/// Default band threshold on `g(t lambda)`.
pub const DEFAULT_BAND_THRESHOLD: f64 = 1.2;

/// Shape parameters of the bandpass kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelShape {
    pub alpha: f64,
    pub beta: f64,
    pub x1: f64,
    pub x2: f64,
}

impl Default for KernelShape {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 2.0,
            x1: 1.0,
            x2: 2.0,
        }
    }
}

/// A complete SGWT filter bank: kernel, scales and scaling function.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDesign<T> {
    alpha: T,
    beta: T,
    x1: T,
    x2: T,
    /// Coefficients `[a0, a1, a2, a3]` of the middle cubic.
    cubic: [T; 4],
    span: T,
    lambda_max: T,
    scales: Vec<T>,
    gamma: T,
}

/// Filter bank with the default kernel shape.
pub fn design_scales<T: Scalar>(lambda_max: T, j: usize, k: T) -> Result<WaveletDesign<T>> {
    WaveletDesign::new(KernelShape::default(), lambda_max, j, k)
}

impl<T: Scalar> WaveletDesign<T> {
    /// `j` scales log-spaced from `x2 K / lambda_max` down to `x2 / lambda_max`
    /// (a single scale sits at `x2 / lambda_max`).
    pub fn new(shape: KernelShape, lambda_max: T, j: usize, k: T) -> Result<Self> {
        if j == 0 {
            return Err(Error::input("number of scales J must be at least 1"));
        }
        if !(k > T::one()) || !k.is_finite() {
            return Err(Error::input(format!("scale span K must exceed 1, got {k}")));
        }
        if !(lambda_max > T::zero()) || !lambda_max.is_finite() {
            return Err(Error::input(format!(
                "lambda_max must be positive, got {lambda_max}"
            )));
        }
        let KernelShape {
            alpha,
            beta,
            x1,
            x2,
        } = shape;
        if !(alpha > 0.0 && beta > 0.0 && x1 > 0.0 && x2 > x1) {
            return Err(Error::input(format!("invalid kernel shape {shape:?}")));
        }
        let cubic = cubic_coefficients(shape)?;
        let (alpha, beta, x1, x2) = (T::lit(alpha), T::lit(beta), T::lit(x1), T::lit(x2));

        let t_max = x2 * k / lambda_max;
        let t_min = x2 / lambda_max;
        let scales = if j == 1 {
            vec![t_min]
        } else {
            let (a, b) = (t_max.ln(), t_min.ln());
            let steps = T::lit((j - 1) as f64);
            (0..j)
                .map(|m| {
                    if m == 0 {
                        t_max
                    } else if m == j - 1 {
                        t_min
                    } else {
                        (a + (b - a) * T::lit(m as f64) / steps).exp()
                    }
                })
                .collect()
        };

        let mut design = Self {
            alpha,
            beta,
            x1,
            x2,
            cubic,
            span: k,
            lambda_max,
            scales,
            gamma: T::one(),
        };
        design.gamma = design.kernel_max();
        Ok(design)
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    /// Number of wavelet scales `J`.
    pub fn num_scales(&self) -> usize {
        self.scales.len()
    }

    /// Number of filters, `J + 1` (scaling function first).
    pub fn num_filters(&self) -> usize {
        self.scales.len() + 1
    }

    pub fn lambda_max(&self) -> T {
        self.lambda_max
    }

    pub fn span(&self) -> T {
        self.span
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn shape(&self) -> KernelShape {
        KernelShape {
            alpha: self.alpha.as_f64(),
            beta: self.beta.as_f64(),
            x1: self.x1.as_f64(),
            x2: self.x2.as_f64(),
        }
    }

    pub fn cubic(&self) -> [T; 4] {
        self.cubic
    }

    /// `g(x)`, with negative `x` treated as `0`.
    pub fn kernel(&self, x: T) -> T {
        let x = x.max(T::zero());
        if x < self.x1 {
            (x / self.x1).powf(self.alpha)
        } else if x <= self.x2 {
            let [a0, a1, a2, a3] = self.cubic;
            a0 + x * (a1 + x * (a2 + x * a3))
        } else {
            (self.x2 / x).powf(self.beta)
        }
    }

    /// `h(x)`.
    pub fn scaling(&self, x: T) -> T {
        let lambda_min = self.lambda_max / self.span;
        let r = x / (T::lit(0.6) * lambda_min);
        self.gamma * (-(r * r * r * r)).exp()
    }

    /// Response of filter `f` at `x`: `h` for `f = 0`, `g(t_f x)` otherwise.
    pub fn filter(&self, f: usize, x: T) -> T {
        if f == 0 {
            self.scaling(x)
        } else {
            self.kernel(self.scales[f - 1] * x)
        }
    }

    fn check_filter(&self, f: usize) -> Result<()> {
        if f > self.num_scales() {
            return Err(Error::input(format!(
                "filter index {f} out of range 0..={}",
                self.num_scales()
            )));
        }
        Ok(())
    }

    /// Maximum of `g` over `x >= 0`: outside `[x1, x2]` the kernel is at most
    /// one, inside it is the largest of the cubic's endpoint and critical
    /// values.
    fn kernel_max(&self) -> T {
        let [_, a1, a2, a3] = self.cubic;
        let mut candidates = vec![self.x1, self.x2];
        // s'(x) = a1 + 2 a2 x + 3 a3 x^2
        let (qa, qb, qc) = (T::lit(3.0) * a3, T::lit(2.0) * a2, a1);
        if qa.abs() > T::epsilon() {
            let disc = qb * qb - T::lit(4.0) * qa * qc;
            if disc >= T::zero() {
                let r = disc.sqrt();
                candidates.push((-qb + r) / (T::lit(2.0) * qa));
                candidates.push((-qb - r) / (T::lit(2.0) * qa));
            }
        } else if qb.abs() > T::epsilon() {
            candidates.push(-qc / qb);
        }
        candidates
            .into_iter()
            .filter(|&x| x >= self.x1 && x <= self.x2)
            .map(|x| self.kernel(x))
            .fold(T::one(), T::max)
    }

    /// The uniform grid on `[0, lambda_max]`.
    pub fn grid(&self) -> Vec<T> {
        let last = T::lit((GRID_POINTS - 1) as f64);
        (0..GRID_POINTS)
            .map(|i| self.lambda_max * T::lit(i as f64) / last)
            .collect()
    }
}

/// Solves for the cubic matching value 1 and slopes `alpha/x1`, `-beta/x2`.
fn cubic_coefficients<T: Scalar>(shape: KernelShape) -> Result<[T; 4]> {
    let KernelShape {
        alpha,
        beta,
        x1,
        x2,
    } = shape;
    let a = DenseMatrix::from_rows(&[
        vec![1.0, x1, x1 * x1, x1 * x1 * x1],
        vec![1.0, x2, x2 * x2, x2 * x2 * x2],
        vec![0.0, 1.0, 2.0 * x1, 3.0 * x1 * x1],
        vec![0.0, 1.0, 2.0 * x2, 3.0 * x2 * x2],
    ])?;
    let c = solve(&a, &[1.0, 1.0, alpha / x1, -beta / x2])?;
    Ok([T::lit(c[0]), T::lit(c[1]), T::lit(c[2]), T::lit(c[3])])
}

pub fn sgwt_kernel<T: Scalar>(x: T, d: &WaveletDesign<T>) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(Error::input(format!(
            "kernel argument must be >= 0, got {x}"
        )));
    }
    Ok(d.kernel(x))
}

pub fn scaling_kernel<T: Scalar>(x: T, d: &WaveletDesign<T>) -> T {
    d.scaling(x)
}

/// First grid point maximising `response`.
fn grid_argmax<T: Scalar>(grid: &[T], response: impl Fn(T) -> T) -> T {
    let mut best = (grid[0], response(grid[0]));
    for &x in &grid[1..] {
        let v = response(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best.0
}

/// Display frequency of each filter (`J + 1` values, scaling function
/// first): `0` for the scaling function, and for each wavelet scale the grid
/// point where `g(t_m lambda)` peaks (lowest on ties).
pub fn atom_frequencies<T: Scalar>(d: &WaveletDesign<T>) -> Vec<T> {
    let grid = d.grid();
    std::iter::once(T::zero())
        .chain(
            d.scales
                .iter()
                .map(|&t| grid_argmax(&grid, |x| d.kernel(t * x))),
        )
        .collect()
}

/// For each wavelet scale, the range of grid points where
/// `g(t_m lambda) >= threshold`, or `None` when no grid point qualifies.
pub fn filter_bands<T: Scalar>(d: &WaveletDesign<T>, threshold: T) -> Vec<Option<(T, T)>> {
    let grid = d.grid();
    d.scales
        .iter()
        .enumerate()
        .map(|(m, &t)| {
            let mut inside = grid
                .iter()
                .copied()
                .filter(|&x| d.kernel(t * x) >= threshold);
            let band = inside.next().map(|lo| (lo, inside.last().unwrap_or(lo)));
            if band.is_none() {
                log::warn!(
                    "wavelet scale {} has an empty band at threshold {threshold}",
                    m + 1
                );
            }
            band
        })
        .collect()
}

/// Bounds `(A, B)` of `h(lambda)^2 + sum_m g(t_m lambda)^2` over the grid.
pub fn frame_bounds<T: Scalar>(d: &WaveletDesign<T>) -> (T, T) {
    d.grid()
        .into_iter()
        .map(|x| {
            (0..d.num_filters())
                .map(|f| {
                    let v = d.filter(f, x);
                    v * v
                })
                .sum::<T>()
        })
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), g| {
            (lo.min(g), hi.max(g))
        })
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    check_len(n, order.len())?;
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::input(format!(
                "vertex order is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Atoms `U diag(r_f) U^T delta_i` for every filter response `r_f` (one value
/// per eigenvalue) and every centre `i`, filter-major, centres in
/// `vertex_order`. Row `f * n + p` has frequency `frequencies[f]` and its
/// centre highlighted.
///
/// Atoms are synthesised in parallel; each is an independent fixed-order sum,
/// so the result does not depend on the number of threads.
pub fn filter_bank_transform<T: Scalar>(
    s: &Spectrum<T>,
    responses: &[Vec<T>],
    frequencies: &[T],
    vertex_order: &[usize],
) -> Result<Transform<T>> {
    let n = s.n();
    check_permutation(vertex_order, n)?;
    check_len(responses.len(), frequencies.len())?;
    for r in responses {
        check_len(n, r.len())?;
    }
    let u = s.basis();
    let jobs: Vec<(usize, usize)> = (0..responses.len())
        .flat_map(|f| vertex_order.iter().map(move |&i| (f, i)))
        .collect();
    let rows: Vec<Vec<T>> = jobs
        .par_iter()
        .map(|&(f, i)| {
            let r = &responses[f];
            let weights: Vec<T> = (0..n).map(|k| r[k] * u[(i, k)]).collect();
            (0..n)
                .map(|v| {
                    u.row(v)
                        .iter()
                        .zip(&weights)
                        .fold(T::zero(), |acc, (&a, &w)| acc + a * w)
                })
                .collect()
        })
        .collect();

    let m = jobs.len();
    let mut h = DenseMatrix::zeros(m, n);
    let mut mask = HighlightMask::new(m, n);
    for (row, (values, &(_, center))) in rows.into_iter().zip(&jobs).enumerate() {
        h.row_mut(row).copy_from_slice(&values);
        mask.set(row, center, true);
    }
    let freqs = jobs.iter().map(|&(f, _)| frequencies[f]).collect();
    let labels = jobs
        .iter()
        .map(|&(filter, center)| AtomLabel::Sgwt { filter, center })
        .collect();
    Transform::new(h, freqs, labels)?.with_highlight(mask)
}

/// The full SGWT analysis operator: `(J + 1) n` atoms, scaling function
/// first, then wavelet scales coarse to fine; within each block the centres
/// follow `vertex_order`.
pub fn sgwt_transform<T: Scalar>(
    s: &Spectrum<T>,
    d: &WaveletDesign<T>,
    vertex_order: &[usize],
) -> Result<Transform<T>> {
    let responses: Vec<Vec<T>> = (0..d.num_filters())
        .map(|f| s.filter_response(|l| d.filter(f, l)))
        .collect::<Result<_>>()?;
    filter_bank_transform(s, &responses, &atom_frequencies(d), vertex_order)
}

/// Rows `f(lambda_k) u_k` for filter `f` (0 = scaling function), with the
/// eigenvalues as frequencies.
pub fn filtered_gft_rows<T: Scalar>(
    s: &Spectrum<T>,
    d: &WaveletDesign<T>,
    filter: usize,
) -> Result<Transform<T>> {
    d.check_filter(filter)?;
    let n = s.n();
    let response = s.filter_response(|l| d.filter(filter, l))?;
    let u = s.basis();
    let h = DenseMatrix::from_fn(n, n, |k, v| response[k] * u[(v, k)]);
    let labels = (0..n).map(|k| AtomLabel::Filtered { filter, k }).collect();
    Transform::new(h, s.eigvals().to_vec(), labels)
}

/// Coefficients `c_0..=c_order` of the Chebyshev expansion of `f` on
/// `[0, lambda_max]`, from `order + 1` Chebyshev-Gauss nodes.
pub fn chebyshev_coefficients<T: Scalar>(
    f: impl Fn(T) -> T,
    order: usize,
    lambda_max: T,
) -> Result<Vec<T>> {
    if order == 0 {
        return Err(Error::input("Chebyshev order must be at least 1"));
    }
    if !(lambda_max > T::zero()) || !lambda_max.is_finite() {
        return Err(Error::input(format!(
            "lambda_max must be positive, got {lambda_max}"
        )));
    }
    let nodes = order + 1;
    let a = lambda_max / T::lit(2.0);
    let pi = T::lit(std::f64::consts::PI);
    let theta: Vec<T> = (1..=nodes)
        .map(|j| pi * (T::lit(j as f64) - T::lit(0.5)) / T::lit(nodes as f64))
        .collect();
    let values: Vec<T> = theta.iter().map(|&th| f(a * th.cos() + a)).collect();
    if let Some(j) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteFilter {
            index: j,
            lambda: (a * theta[j].cos() + a).as_f64(),
        });
    }
    let scale = T::lit(2.0) / T::lit(nodes as f64);
    Ok((0..=order)
        .map(|k| {
            scale
                * values
                    .iter()
                    .zip(&theta)
                    .map(|(&v, &th)| v * (T::lit(k as f64) * th).cos())
                    .sum::<T>()
        })
        .collect())
}

/// Approximates `f(L) x` with a degree-`order` Chebyshev polynomial of the
/// chosen operator, using only matrix-vector products. `lambda_max` must
/// bound the operator's spectrum from above.
pub fn chebyshev_filter<T: Scalar>(
    g: &Graph<T>,
    operator: OperatorKind,
    f: impl Fn(T) -> T,
    order: usize,
    x: &[T],
    lambda_max: T,
) -> Result<Vec<T>> {
    check_len(g.n(), x.len())?;
    let c = chebyshev_coefficients(f, order, lambda_max)?;
    let l = operator.matrix(g)?;
    let a = lambda_max / T::lit(2.0);
    // shifted operator (L - aI) / a
    let shifted = |v: &[T]| -> Result<Vec<T>> {
        Ok(l.matvec(v)?
            .into_iter()
            .zip(v)
            .map(|(lv, &vi)| (lv - a * vi) / a)
            .collect())
    };
    let axpy = |acc: &mut [T], coef: T, v: &[T]| {
        for (o, &vi) in acc.iter_mut().zip(v) {
            *o = *o + coef * vi;
        }
    };

    let mut out: Vec<T> = x.iter().map(|&v| v * c[0] / T::lit(2.0)).collect();
    let mut prev = x.to_vec();
    let mut cur = shifted(x)?;
    axpy(&mut out, c[1], &cur);
    for &ck in &c[2..] {
        let next: Vec<T> = shifted(&cur)?
            .into_iter()
            .zip(&prev)
            .map(|(s, &p)| T::lit(2.0) * s - p)
            .collect();
        axpy(&mut out, ck, &next);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// Metadata written next to a dumped SGWT matrix.
#[derive(Debug, Clone, Serialize)]
pub struct SgwtSidecar {
    pub alpha: f64,
    pub beta: f64,
    pub x1: f64,
    pub x2: f64,
    #[serde(rename = "J")]
    pub num_scales: usize,
    #[serde(rename = "K")]
    pub span: f64,
    pub lambda_max: f64,
    pub gamma: f64,
    pub scales: Vec<f64>,
    /// One per filter, scaling function first.
    pub filter_frequencies: Vec<f64>,
    /// One per row of the matrix.
    pub frequencies: Vec<f64>,
    pub band_threshold: f64,
    /// One per wavelet scale; `null` for an empty band.
    pub bands: Vec<Option<[f64; 2]>>,
    pub frame_bounds: [f64; 2],
}

impl SgwtSidecar {
    pub fn new<T: Scalar>(d: &WaveletDesign<T>, t: &Transform<T>, threshold: T) -> Self {
        let f64s = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        let (a, b) = frame_bounds(d);
        let shape = d.shape();
        Self {
            alpha: shape.alpha,
            beta: shape.beta,
            x1: shape.x1,
            x2: shape.x2,
            num_scales: d.num_scales(),
            span: d.span().as_f64(),
            lambda_max: d.lambda_max().as_f64(),
            gamma: d.gamma().as_f64(),
            scales: f64s(d.scales()),
            filter_frequencies: f64s(&atom_frequencies(d)),
            frequencies: f64s(t.frequencies()),
            band_threshold: threshold.as_f64(),
            bands: filter_bands(d, threshold)
                .into_iter()
                .map(|b| b.map(|(lo, hi)| [lo.as_f64(), hi.as_f64()]))
                .collect(),
            frame_bounds: [a.as_f64(), b.as_f64()],
        }
    }
}
