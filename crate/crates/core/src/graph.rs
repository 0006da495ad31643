//! Weighted undirected graphs, graph signals and the three Laplacian operators.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub i: usize,
    pub j: usize,
    pub weight: T,
}

/// A weighted undirected graph on vertices `0..n`.
///
/// Edges are stored canonically: `i < j`, sorted by `(i, j)`, no duplicates,
/// every weight finite and strictly positive. All downstream computations are
/// therefore independent of the order in which edges were supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph<T> {
    n: usize,
    edges: Vec<Edge<T>>,
    coords: Option<Vec<[T; 2]>>,
    clusters: Option<Vec<usize>>,
}

impl<T: Scalar> Graph<T> {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Result<Self> {
        let mut out: Vec<Edge<T>> = Vec::new();
        for (k, (a, b, w)) in edges.into_iter().enumerate() {
            if a == b {
                return Err(Error::input(format!("edge {k}: self-loop ({a}, {b})")));
            }
            if a >= n || b >= n {
                return Err(Error::input(format!(
                    "edge {k}: vertex out of range ({a}, {b}) for n = {n}"
                )));
            }
            if !w.is_finite() || w <= T::zero() {
                return Err(Error::input(format!(
                    "edge {k}: weight must be finite and positive, got {w}"
                )));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { i, j, weight: w });
        }
        out.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = out
            .windows(2)
            .find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j))
        {
            return Err(Error::input(format!(
                "duplicate edge ({}, {})",
                w[0].i, w[0].j
            )));
        }
        Ok(Self {
            n,
            edges: out,
            coords: None,
            clusters: None,
        })
    }

    pub fn with_coords(mut self, coords: Vec<[T; 2]>) -> Result<Self> {
        check_len(self.n, coords.len())?;
        if let Some(i) = coords
            .iter()
            .position(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::input(format!(
                "coordinate of vertex {i} is not finite"
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn with_clusters(mut self, clusters: Vec<usize>) -> Result<Self> {
        check_len(self.n, clusters.len())?;
        self.clusters = Some(clusters);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn coords(&self) -> Option<&[[T; 2]]> {
        self.coords.as_deref()
    }

    pub fn clusters(&self) -> Option<&[usize]> {
        self.clusters.as_deref()
    }

    pub fn weight_matrix(&self) -> SymMatrix<T> {
        let mut w = DenseMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            w[(e.i, e.j)] = e.weight;
            w[(e.j, e.i)] = e.weight;
        }
        SymMatrix::new(w).expect("edge weights are finite and mirrored")
    }

    /// `d_i = sum_j w_ij`.
    pub fn degrees(&self) -> Signal<T> {
        let mut d = vec![T::zero(); self.n];
        for e in &self.edges {
            d[e.i] = d[e.i] + e.weight;
            d[e.j] = d[e.j] + e.weight;
        }
        Signal::new(d)
    }

    fn positive_degrees(&self) -> Result<Vec<T>> {
        let d = self.degrees().into_vec();
        match d.iter().position(|&v| v <= T::zero()) {
            Some(i) => Err(Error::IsolatedVertex(i)),
            None => Ok(d),
        }
    }

    /// `L = D - W`. Isolated vertices are allowed (zero row) but logged.
    pub fn combinatorial_laplacian(&self) -> SymMatrix<T> {
        let d = self.degrees();
        if let Some(i) = d.iter().position(|&v| v == T::zero()) {
            if self.n > 1 {
                log::warn!("vertex {i} is isolated; combinatorial Laplacian has a zero row");
            }
        }
        let mut l = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            l[(i, i)] = d[i];
        }
        for e in &self.edges {
            l[(e.i, e.j)] = -e.weight;
            l[(e.j, e.i)] = -e.weight;
        }
        SymMatrix::new(l).expect("Laplacian is symmetric by construction")
    }

    /// `D^-1/2 L D^-1/2`, with an exact unit diagonal.
    pub fn normalized_laplacian(&self) -> Result<SymMatrix<T>> {
        let d = self.positive_degrees()?;
        let s: Vec<T> = d.iter().map(|v| v.sqrt()).collect();
        let mut l = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            l[(i, i)] = T::one();
        }
        for e in &self.edges {
            let v = -e.weight / (s[e.i] * s[e.j]);
            l[(e.i, e.j)] = v;
            l[(e.j, e.i)] = v;
        }
        SymMatrix::new(l)
    }

    /// `I - D^-1 W` (not symmetric in general).
    pub fn random_walk_laplacian(&self) -> Result<DenseMatrix<T>> {
        let d = self.positive_degrees()?;
        let mut l = DenseMatrix::identity(self.n);
        for e in &self.edges {
            l[(e.i, e.j)] = -e.weight / d[e.i];
            l[(e.j, e.i)] = -e.weight / d[e.j];
        }
        Ok(l)
    }

    /// `sum_{(i,j) in E} w_ij (x_i - x_j)^2`, evaluated edge by edge.
    pub fn laplacian_quadratic_form(&self, x: &[T]) -> Result<T> {
        check_len(self.n, x.len())?;
        Ok(self.edges.iter().fold(T::zero(), |acc, e| {
            let diff = x[e.i] - x[e.j];
            acc + e.weight * diff * diff
        }))
    }

    /// Connected component id per vertex, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_len(self.n, perm.len())?;
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::input("relabel needs a permutation"));
            }
        }
        let mut g = Self::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.weight)),
        )?;
        g.coords = self.coords.as_deref().map(|src| scatter(src, perm));
        g.clusters = self.clusters.as_deref().map(|src| scatter(src, perm));
        Ok(g)
    }

    pub fn cast<U: Scalar>(&self) -> Graph<U> {
        let c = |v: T| U::lit(v.as_f64());
        Graph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    i: e.i,
                    j: e.j,
                    weight: c(e.weight),
                })
                .collect(),
            coords: self
                .coords
                .as_ref()
                .map(|cs| cs.iter().map(|p| [c(p[0]), c(p[1])]).collect()),
            clusters: self.clusters.clone(),
        }
    }
}

/// `out[perm[v]] = src[v]`.
fn scatter<V: Copy>(src: &[V], perm: &[usize]) -> Vec<V> {
    let mut out = src.to_vec();
    for (v, &p) in perm.iter().enumerate() {
        out[p] = src[v];
    }
    out
}

/// Complete graph on `points` with Gaussian-kernel weights
/// `exp(-dist^2 / (2 sigma^2))`. Pairs whose weight falls below `cutoff`
/// (or underflows to zero) are left out.
pub fn build_gaussian_kernel_graph<T: Scalar>(
    points: &[[T; 2]],
    sigma: T,
    cutoff: Option<T>,
) -> Result<Graph<T>> {
    if points.len() < 2 {
        return Err(Error::input("need at least two points"));
    }
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::input(format!("sigma must be positive, got {sigma}")));
    }
    if let Some(c) = cutoff {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(Error::input(format!("cutoff must be nonnegative, got {c}")));
        }
    }
    if let Some(i) = points
        .iter()
        .position(|p| !p[0].is_finite() || !p[1].is_finite())
    {
        return Err(Error::input(format!(
            "point {i} has a non-finite coordinate"
        )));
    }
    let denom = T::lit(2.0) * sigma * sigma;
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            let w = (-(dx * dx + dy * dy) / denom).exp();
            if w <= T::zero() || cutoff.is_some_and(|c| w < c) {
                continue;
            }
            edges.push((i, j, w));
        }
    }
    Graph::new(points.len(), edges)?.with_coords(points.to_vec())
}

/// Which symmetric operator a spectrum diagonalises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    #[default]
    Combinatorial,
    Normalized,
}

impl OperatorKind {
    pub fn matrix<T: Scalar>(self, g: &Graph<T>) -> Result<SymMatrix<T>> {
        match self {
            OperatorKind::Combinatorial => Ok(g.combinatorial_laplacian()),
            OperatorKind::Normalized => g.normalized_laplacian(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Combinatorial => "combinatorial",
            OperatorKind::Normalized => "normalized",
        }
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combinatorial" => Ok(Self::Combinatorial),
            "normalized" => Ok(Self::Normalized),
            other => Err(Error::input(format!("unknown operator '{other}'"))),
        }
    }
}

/// A real value per vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Signal<T>(Vec<T>);

impl<T: Scalar> Signal<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self(vec![c; n])
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn norm(&self) -> T {
        crate::matrix::norm2(&self.0)
    }
}

impl<T> Deref for Signal<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Index<usize> for Signal<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> From<Vec<T>> for Signal<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph<f64> {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn gaussian_kernel_weights() {
        let g = build_gaussian_kernel_graph(&[[0.0, 0.0], [0.0, 0.0]], 1.5, None).unwrap();
        assert_eq!(g.edges()[0].weight, 1.0);

        let g = build_gaussian_kernel_graph::<f64>(&[[0.0, 0.0], [1.5, 0.0]], 1.5, None).unwrap();
        // exp(-1.5^2 / (2 * 1.5^2)) = exp(-1/2)
        assert!((g.edges()[0].weight - 0.606_530_659_712_633_4).abs() < 1e-15);

        let g =
            build_gaussian_kernel_graph(&[[0.0, 0.0], [0.7, 0.0], [1.4, 0.0]], 0.9, None).unwrap();
        let w = g.weight_matrix();
        assert_eq!(w[(0, 1)], w[(1, 2)]);
        assert!(w[(0, 2)] < w[(0, 1)]);
    }

    #[test]
    fn gaussian_kernel_cutoff_and_errors() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]];
        let g = build_gaussian_kernel_graph(&pts, 1.0, Some(0.1)).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert!(build_gaussian_kernel_graph(&[[0.0, 0.0], [f64::NAN, 0.0]], 1.0, None).is_err());
        assert!(build_gaussian_kernel_graph(&pts, 0.0, None).is_err());
        assert!(build_gaussian_kernel_graph(&pts[..1], 1.0, None).is_err());
    }

    #[test]
    fn degrees_examples() {
        assert_eq!(&*path3().degrees(), &[1.0, 2.0, 1.0]);
        let g = Graph::new(2, [(0, 1, 0.5)]).unwrap();
        assert_eq!(&*g.degrees(), &[0.5, 0.5]);
    }

    #[test]
    fn combinatorial_laplacian_examples() {
        let l = path3().combinatorial_laplacian();
        let expected = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l[(i, j)], expected[i][j]);
            }
        }
        let empty = Graph::<f64>::new(4, []).unwrap().combinatorial_laplacian();
        assert_eq!(empty, SymMatrix::zeros(4));
    }

    #[test]
    fn normalized_and_random_walk_examples() {
        let k2 = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let ln = k2.normalized_laplacian().unwrap();
        assert_eq!(ln.as_matrix().as_slice(), &[1.0, -1.0, -1.0, 1.0]);
        let lrw = k2.random_walk_laplacian().unwrap();
        assert_eq!(lrw.as_slice(), &[1.0, -1.0, -1.0, 1.0]);

        let ln = path3().normalized_laplacian().unwrap();
        for i in 0..3 {
            assert_eq!(ln[(i, i)], 1.0);
        }
        let lrw = path3().random_walk_laplacian().unwrap();
        for i in 0..3 {
            let s: f64 = lrw.row(i).iter().sum();
            assert!(s.abs() < 1e-15);
        }
    }

    #[test]
    fn isolated_vertex_is_named() {
        let g = Graph::new(3, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            g.normalized_laplacian(),
            Err(Error::IsolatedVertex(2))
        ));
        assert!(matches!(
            g.random_walk_laplacian(),
            Err(Error::IsolatedVertex(2))
        ));
        // still valid for the combinatorial operator
        assert_eq!(g.combinatorial_laplacian()[(2, 2)], 0.0);
    }

    #[test]
    fn quadratic_form_examples() {
        let g = path3();
        assert_eq!(g.laplacian_quadratic_form(&[3.0, 3.0, 3.0]).unwrap(), 0.0);
        assert_eq!(g.laplacian_quadratic_form(&[1.0, 0.0, -1.0]).unwrap(), 2.0);
        assert!(matches!(
            g.laplacian_quadratic_form(&[1.0]),
            Err(Error::LengthMismatch {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn invariant_violations_are_rejected() {
        assert!(Graph::new(3, [(2, 2, 1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, -1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, 0.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(Graph::new(3, [(0, 3, 1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, 1.0)])
            .unwrap()
            .with_clusters(vec![0, 1])
            .is_err());
    }

    #[test]
    fn edge_order_is_canonical() {
        let a = Graph::new(4, [(2, 3, 0.5), (1, 0, 1.0), (0, 2, 2.0)]).unwrap();
        let b = Graph::new(4, [(0, 2, 2.0), (0, 1, 1.0), (3, 2, 0.5)]).unwrap();
        assert_eq!(a, b);
        assert!(a.is_connected());
        assert_eq!(Graph::<f64>::new(3, []).unwrap().component_count(), 3);
    }
}
