//! Ready-made figures on the toy graph.
//!
//! * `fig2` — the first eight GFT basis vectors;
//! * `fig3` — the full GFT with eight equal spectral bands and the order of a
//!   complete spectral-proxy sampling run highlighted;
//! * `fig5` — all SGWT atoms (7 scales + scaling function), frequencies at
//!   the peak response, bands where `g(t lambda) >= 1.2`;
//! * `fig6` — the GFT basis after each SGWT filter, stacked filter by filter.

use crate::embedding::{embed_1d, EmbeddingMode};
use crate::error::{Error, Result};
use crate::figure::{
    equal_bands, layout_figure, ClusterSpec, FigureModel, FigureOptions, Normalization,
    DEFAULT_PALETTE,
};
use crate::graph::{Graph, OperatorKind};
use crate::sampling::{greedy_sample, highlight_from_sampling, SamplingMethod};
use crate::sgwt::{
    design_scales, filter_bands, filtered_gft_rows, sgwt_transform, WaveletDesign,
    DEFAULT_BAND_THRESHOLD, DEFAULT_SCALES, DEFAULT_SCALE_SPAN,
};
use crate::spectral::Spectrum;
use crate::toy::make_toy_graph;
use crate::transform::Transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig5,
        FigureId::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::input(format!("unknown figure '{s}'")))
    }
}

/// Number of GFT basis vectors shown in `fig2`.
pub const FIG2_ROWS: usize = 8;

/// Number of equal spectral bands in `fig3`.
pub const FIG3_BANDS: usize = 8;

/// Canvas height for the tall SGWT figures.
const TALL_HEIGHT: f64 = 1600.0;

fn base_options(g: &Graph<f64>, s: &Spectrum<f64>) -> FigureOptions {
    FigureOptions {
        clusters: g.clusters().map(|c| ClusterSpec::Labels(c.to_vec())),
        lambda_max: Some(s.lambda_max()),
        ..FigureOptions::default()
    }
}

/// Wavelet bands as figure bands, coloured by scale index so that colours
/// stay stable when a band is empty.
fn wavelet_bands(d: &WaveletDesign<f64>) -> (Vec<(f64, f64)>, Vec<[u8; 3]>) {
    filter_bands(d, DEFAULT_BAND_THRESHOLD)
        .into_iter()
        .enumerate()
        .filter_map(|(m, b)| b.map(|b| (b, DEFAULT_PALETTE[m % DEFAULT_PALETTE.len()])))
        .unzip()
}

/// Builds figure `id` for the toy graph drawn with `seed`.
pub fn repro(id: FigureId, seed: u64, operator: OperatorKind) -> Result<FigureModel> {
    let g = make_toy_graph::<f64>(seed);
    let s = Spectrum::of(&g, operator)?;
    let mut opts = base_options(&g, &s);
    let t = match id {
        FigureId::Fig2 => Transform::gft(&s).top_rows(FIG2_ROWS),
        FigureId::Fig3 => {
            let run = greedy_sample(&s, g.n(), SamplingMethod::default())?;
            opts.bands = Some(equal_bands(s.lambda_max(), FIG3_BANDS));
            let mask = highlight_from_sampling(&run, g.n(), g.n())?;
            Transform::gft(&s).with_highlight(mask)?
        }
        FigureId::Fig5 | FigureId::Fig6 => {
            let d = design_scales(s.lambda_max(), DEFAULT_SCALES, DEFAULT_SCALE_SPAN)?;
            let (bands, colors) = wavelet_bands(&d);
            opts.bands = Some(bands);
            opts.band_colors = Some(colors);
            opts.normalization = Normalization::OverallMaxAbs;
            opts.height = TALL_HEIGHT;
            if id == FigureId::Fig5 {
                let order = embed_1d(&g, EmbeddingMode::RwSecondEigvec, None)?.order();
                sgwt_transform(&s, &d, &order)?
            } else {
                let parts = (0..d.num_filters())
                    .map(|f| filtered_gft_rows(&s, &d, f))
                    .collect::<Result<Vec<_>>>()?;
                Transform::stack(&parts)?
            }
        }
    };
    layout_figure(&t, &g, &opts)
}
