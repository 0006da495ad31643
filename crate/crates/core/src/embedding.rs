//! One-dimensional vertex embeddings (the horizontal axis of stacked
//! transform figures) and spectral k-means clustering.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, OperatorKind};
use crate::linalg::TotalCmp;
use crate::scalar::Scalar;
use crate::spectral::{fix_sign, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMode {
    /// Right eigenvector of `L_rw` for the second-smallest eigenvalue.
    #[default]
    RwSecondEigvec,
    /// Rank transform of that eigenvector, equispaced in `[0, 1]`.
    RegularRank,
    /// Caller-supplied positions.
    Custom,
}

impl EmbeddingMode {
    pub fn name(self) -> &'static str {
        match self {
            EmbeddingMode::RwSecondEigvec => "rw_second_eigvec",
            EmbeddingMode::RegularRank => "regular_rank",
            EmbeddingMode::Custom => "custom",
        }
    }
}

impl std::str::FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rw_second_eigvec" | "rw" => Ok(Self::RwSecondEigvec),
            "regular_rank" | "regular" => Ok(Self::RegularRank),
            "custom" => Ok(Self::Custom),
            other => Err(Error::input(format!("unknown embedding mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    positions: Vec<T>,
    mode: EmbeddingMode,
}

impl<T: Scalar> Embedding<T> {
    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn mode(&self) -> EmbeddingMode {
        self.mode
    }

    /// Vertices sorted by position; equal positions keep index order.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.positions.len()).collect();
        idx.sort_by(|&a, &b| self.positions[a].total_cmp_ref(&self.positions[b]));
        idx
    }
}

fn require_connected<T: Scalar>(g: &Graph<T>) -> Result<()> {
    let components = g.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(())
}

/// Right eigenvectors `D^{-1/2} v_k` of `L_rw` for `k in ks`, each sign-fixed.
fn random_walk_vectors<T: Scalar>(g: &Graph<T>, ks: std::ops::Range<usize>) -> Result<Vec<Vec<T>>> {
    let s = Spectrum::of(g, OperatorKind::Normalized)?;
    let d = g.degrees();
    Ok(ks
        .map(|k| {
            let mut v: Vec<T> = s
                .vector(k)
                .iter()
                .zip(d.iter())
                .map(|(&x, &di)| x / di.sqrt())
                .collect();
            fix_sign(&mut v);
            v
        })
        .collect())
}

pub fn embed_1d<T: Scalar>(
    g: &Graph<T>,
    mode: EmbeddingMode,
    custom: Option<&[T]>,
) -> Result<Embedding<T>> {
    let n = g.n();
    if mode == EmbeddingMode::Custom {
        let custom = custom.ok_or_else(|| Error::input("custom embedding mode needs positions"))?;
        check_len(n, custom.len())?;
        if let Some(i) = custom.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("custom position {i} is not finite")));
        }
        return Ok(Embedding {
            positions: custom.to_vec(),
            mode,
        });
    }
    if n < 2 {
        return Err(Error::input(
            "spectral embedding needs at least two vertices",
        ));
    }
    g.normalized_laplacian()?; // names an isolated vertex, if any
    require_connected(g)?;
    let fiedler = random_walk_vectors(g, 1..2)?.remove(0);
    let embedding = Embedding {
        positions: fiedler,
        mode,
    };
    if mode == EmbeddingMode::RwSecondEigvec {
        return Ok(embedding);
    }
    let denom = T::lit((n - 1) as f64);
    let mut positions = vec![T::zero(); n];
    for (rank, v) in embedding.order().into_iter().enumerate() {
        positions[v] = T::lit(rank as f64) / denom;
    }
    Ok(Embedding { positions, mode })
}

const MAX_LLOYD_ITERATIONS: usize = 300;

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Index of the first maximum of `values`.
fn first_argmax<T: Scalar>(values: impl IntoIterator<Item = T>) -> usize {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map_or(0, |(i, _)| i)
}

/// Deterministic k-means with farthest-point seeding.
///
/// The first centre is the point with the smallest first coordinate (lowest
/// index on ties); each further centre is the point farthest from all chosen
/// centres. Returns one label per point in `0..k`.
pub fn kmeans<T: Scalar>(points: &[Vec<T>], k: usize) -> Result<Vec<usize>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} must be in 1..={n}")));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Ok(vec![0; n]);
    }
    let first = first_argmax(points.iter().map(|p| -p[0]));
    let mut centers = vec![points[first].clone()];
    let mut nearest: Vec<T> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let next = first_argmax(nearest.iter().copied());
        centers.push(points[next].clone());
        for (d, p) in nearest.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &points[next]));
        }
    }

    let assign = |centers: &[Vec<T>]| -> Vec<usize> {
        points
            .iter()
            .map(|p| first_argmax(centers.iter().map(|c| -sq_dist(p, c))))
            .collect()
    };
    let mut labels = assign(&centers);
    for _ in 0..MAX_LLOYD_ITERATIONS {
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<&Vec<T>> = points
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == c)
                .map(|(p, _)| p)
                .collect();
            if members.is_empty() {
                continue;
            }
            let count = T::lit(members.len() as f64);
            for (d, value) in center.iter_mut().enumerate() {
                *value = members.iter().map(|p| p[d]).sum::<T>() / count;
            }
        }
        let next = assign(&centers);
        if next == labels {
            break;
        }
        labels = next;
    }
    Ok(labels)
}

/// Spectral clustering: k-means on the random-walk eigenvectors
/// `1..k` (the constant eigenvector is skipped), labels renumbered by first
/// appearance along the [`EmbeddingMode::RwSecondEigvec`] embedding.
pub fn cluster_kmeans_spectral<T: Scalar>(g: &Graph<T>, k: usize) -> Result<Vec<usize>> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} must be in 1..={n}")));
    }
    if k == 1 {
        return Ok(vec![0; n]);
    }
    g.normalized_laplacian()?;
    require_connected(g)?;
    let columns = random_walk_vectors(g, 1..k)?;
    let points: Vec<Vec<T>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let raw = kmeans(&points, k)?;

    let order = Embedding {
        positions: columns[0].clone(),
        mode: EmbeddingMode::RwSecondEigvec,
    }
    .order();
    let mut renumber = vec![usize::MAX; k];
    let mut next = 0;
    for &v in &order {
        if renumber[raw[v]] == usize::MAX {
            renumber[raw[v]] = next;
            next += 1;
        }
    }
    Ok(raw.into_iter().map(|l| renumber[l]).collect())
}
