//! Seeded three-cluster point cloud used by the figure recipes and tests.
//!
//! Vertices `0..12` form a tight cluster (label 0), `12..20` and `20..27` two
//! looser ones (labels 1 and 2). Each cluster is drawn from a truncated
//! isotropic Gaussian around a fixed centre; the two loose clusters also
//! enforce a minimum spacing between their points, which keeps their
//! internal weights small compared with the tight cluster. The truncation
//! radii and the gap between clusters guarantee that every intra-cluster
//! distance is shorter than every inter-cluster distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::graph::{build_gaussian_kernel_graph, Graph};
use crate::scalar::Scalar;

/// Gaussian kernel width of the toy graph.
pub const TOY_SIGMA: f64 = 1.5;

/// Cluster sizes, in vertex order.
pub const TOY_CLUSTER_SIZES: [usize; 3] = [12, 8, 7];

/// Label of the densest cluster.
pub const TOY_DENSE_CLUSTER: usize = 0;

struct Blob {
    size: usize,
    spread: f64,
    radius: f64,
    min_spacing: f64,
}

const BLOBS: [Blob; 3] = [
    Blob {
        size: 12,
        spread: 0.3,
        radius: 0.75,
        min_spacing: 0.0,
    },
    Blob {
        size: 8,
        spread: 2.0,
        radius: 3.0,
        min_spacing: 1.8,
    },
    Blob {
        size: 7,
        spread: 1.7,
        radius: 2.55,
        min_spacing: 1.8,
    },
];

/// Closest approach between the truncation discs of two clusters.
const GAP: f64 = 7.5;

/// Draws rejected after this many tries restart the whole cluster.
const MAX_TRIES_PER_POINT: usize = 5000;

fn centers() -> [[f64; 2]; 3] {
    let d01 = GAP + BLOBS[0].radius + BLOBS[1].radius;
    let d02 = GAP + BLOBS[0].radius + BLOBS[2].radius;
    let d12 = GAP + BLOBS[1].radius + BLOBS[2].radius;
    let x = (d02 * d02 - d12 * d12 + d01 * d01) / (2.0 * d01);
    let y = (d02 * d02 - x * x).sqrt();
    [[0.0, 0.0], [d01, 0.0], [x, y]]
}

fn sample_blob(rng: &mut ChaCha8Rng, blob: &Blob, center: [f64; 2]) -> Vec<[f64; 2]> {
    'restart: loop {
        let mut points: Vec<[f64; 2]> = Vec::with_capacity(blob.size);
        while points.len() < blob.size {
            let mut accepted = false;
            for _ in 0..MAX_TRIES_PER_POINT {
                let dx: f64 = rng.sample::<f64, _>(StandardNormal) * blob.spread;
                let dy: f64 = rng.sample::<f64, _>(StandardNormal) * blob.spread;
                if dx.hypot(dy) > blob.radius {
                    continue;
                }
                let p = [center[0] + dx, center[1] + dy];
                if points
                    .iter()
                    .all(|q| (p[0] - q[0]).hypot(p[1] - q[1]) >= blob.min_spacing)
                {
                    points.push(p);
                    accepted = true;
                    break;
                }
            }
            if !accepted {
                continue 'restart;
            }
        }
        return points;
    }
}

/// Point coordinates of the toy graph for `seed`.
pub fn toy_points(seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BLOBS
        .iter()
        .zip(centers())
        .flat_map(|(blob, c)| sample_blob(&mut rng, blob, c))
        .collect()
}

/// The 27-vertex toy graph: Gaussian-kernel weights with `sigma = 1.5`,
/// coordinates and ground-truth cluster labels attached.
pub fn make_toy_graph<T: Scalar>(seed: u64) -> Graph<T> {
    let points: Vec<[T; 2]> = toy_points(seed)
        .into_iter()
        .map(|p| [T::lit(p[0]), T::lit(p[1])])
        .collect();
    let labels = TOY_CLUSTER_SIZES
        .iter()
        .enumerate()
        .flat_map(|(c, &size)| std::iter::repeat_n(c, size))
        .collect();
    build_gaussian_kernel_graph(&points, T::lit(TOY_SIGMA), None)
        .and_then(|g| g.with_clusters(labels))
        .expect("toy point cloud is finite and has 27 points")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_determinism() {
        let g = make_toy_graph::<f64>(0);
        assert_eq!(g.n(), 27);
        let labels = g.clusters().unwrap();
        for (c, &size) in TOY_CLUSTER_SIZES.iter().enumerate() {
            assert_eq!(labels.iter().filter(|&&l| l == c).count(), size);
        }
        assert_eq!(g, make_toy_graph::<f64>(0));
        assert_ne!(g, make_toy_graph::<f64>(1));
    }

    #[test]
    fn intra_weights_dominate_inter_weights() {
        for seed in 0..5 {
            let g = make_toy_graph::<f64>(seed);
            let labels = g.clusters().unwrap();
            let (mut min_intra, mut max_inter) = (f64::INFINITY, 0.0f64);
            for e in g.edges() {
                if labels[e.i] == labels[e.j] {
                    min_intra = min_intra.min(e.weight);
                } else {
                    max_inter = max_inter.max(e.weight);
                }
            }
            assert!(min_intra > max_inter, "seed {seed}");
            assert!(g.degrees().iter().all(|&d| d > 0.0));
        }
    }

    #[test]
    fn cluster_centres_are_separated_by_the_gap() {
        let c = centers();
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        assert!((d(c[0], c[1]) - 11.25).abs() < 1e-12);
        assert!((d(c[0], c[2]) - 10.8).abs() < 1e-12);
        assert!((d(c[1], c[2]) - 13.05).abs() < 1e-12);
    }
}
