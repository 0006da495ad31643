//! Graph Fourier transforms, spectral graph wavelets, spectral embeddings,
//! greedy sampling sets and deterministic stacked-transform figures for
//! weighted undirected graphs.
//!
//! The numeric core is generic over the scalar type ([`Scalar`], implemented
//! for `f32` and `f64`); the `*64` / `*32` aliases below name the concrete
//! instantiations.
//!
//! ```
//! use spectrascope::{make_toy_graph, OperatorKind, Spectrum64};
//!
//! let g = make_toy_graph::<f64>(0);
//! let s = Spectrum64::of(&g, OperatorKind::Combinatorial).unwrap();
//! assert_eq!(s.eigvals()[0], 0.0);
//! ```

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod embedding;
pub mod error;
pub mod figure;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod repro;
pub mod sampling;
pub mod scalar;
pub mod sgwt;
pub mod spectral;
pub mod toy;
pub mod transform;

pub use embedding::{cluster_kmeans_spectral, embed_1d, kmeans, Embedding, EmbeddingMode};
pub use error::{Error, ErrorKind, Result};
pub use figure::{
    layout_figure, normalize_amplitudes, render_svg, support_indices, ClusterSpec, FigureModel,
    FigureOptions, Normalization, YScheme,
};
pub use graph::{build_gaussian_kernel_graph, Edge, Graph, OperatorKind, Signal};
pub use matrix::{DenseMatrix, SymMatrix};
pub use repro::{repro, FigureId};
pub use sampling::{
    greedy_sample, highlight_from_sampling, reconstruct_bandlimited, SamplingMethod, SamplingResult,
};
pub use scalar::Scalar;
pub use sgwt::{
    atom_frequencies, chebyshev_coefficients, chebyshev_filter, design_scales, filter_bands,
    filtered_gft_rows, frame_bounds, scaling_kernel, sgwt_kernel, sgwt_transform, KernelShape,
    WaveletDesign,
};
pub use spectral::{eigendecompose, Spectrum};
pub use toy::make_toy_graph;
pub use transform::{AtomLabel, HighlightMask, Transform};

pub type Graph64 = Graph<f64>;
pub type Graph32 = Graph<f32>;
pub type Signal64 = Signal<f64>;
pub type Signal32 = Signal<f32>;
pub type SymMatrix64 = SymMatrix<f64>;
pub type SymMatrix32 = SymMatrix<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Transform64 = Transform<f64>;
pub type Transform32 = Transform<f32>;
pub type WaveletDesign64 = WaveletDesign<f64>;
pub type WaveletDesign32 = WaveletDesign<f32>;
pub type SamplingResult64 = SamplingResult<f64>;
pub type SamplingResult32 = SamplingResult<f32>;
