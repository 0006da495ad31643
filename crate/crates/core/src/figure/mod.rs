//! Stacked-transform figures: every atom of a transform is drawn as a pseudo
//! time series over a 1D vertex embedding, stacked vertically, and linked to
//! its frequency on a right-hand axis.
//!
//! [`layout_figure`] resolves all geometry into a [`FigureModel`] whose
//! coordinates are y-up (atom 0 at the bottom); [`render_svg`] serialises it.
//! The plot area spans `x in [0, 0.82 W]`; the frequency axis sits at
//! `0.92 W`.

mod svg;

pub use svg::render_svg;

use serde::{Deserialize, Serialize};

use crate::embedding::{cluster_kmeans_spectral, embed_1d, EmbeddingMode};
use crate::error::{check_len, Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::transform::{HighlightMask, Transform};

/// Fraction of the canvas width used by the plot area.
pub const PLOT_FRACTION: f64 = 0.82;

/// Horizontal position of the frequency axis, as a fraction of the width.
pub const AXIS_FRACTION: f64 = 0.92;

/// Gray level (0-255) used for zero magnitude.
pub const LIGHT_GRAY: f64 = 200.0;

/// Band colours used when none are given, cycled.
pub const DEFAULT_PALETTE: [[u8; 3]; 8] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [188, 189, 34],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Each row to unit l2 norm.
    L2,
    /// Each row to unit maximum magnitude.
    #[default]
    MaxAbs,
    /// One divisor for the whole matrix.
    OverallMaxAbs,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Self::L2),
            "max_abs" => Ok(Self::MaxAbs),
            "overall_max_abs" => Ok(Self::OverallMaxAbs),
            other => Err(Error::input(format!("unknown normalization '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YScheme {
    /// Rows equally spaced by index.
    #[default]
    Regular,
    /// Row baselines placed at their frequency.
    Freq,
}

impl std::str::FromStr for YScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(Self::Regular),
            "freq" => Ok(Self::Freq),
            other => Err(Error::input(format!("unknown y scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClusterSpec {
    Labels(Vec<usize>),
    /// Computed with spectral k-means.
    Count(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub embedding_mode: EmbeddingMode,
    pub custom_embedding: Option<Vec<f64>>,
    pub clusters: Option<ClusterSpec>,
    pub bands: Option<Vec<(f64, f64)>>,
    pub band_colors: Option<Vec<[u8; 3]>>,
    pub normalization: Normalization,
    pub amplitude_scale: f64,
    pub epsilon_support: f64,
    pub support_dot_size: f64,
    pub y_scheme: YScheme,
    /// Overrides the transform's own highlight mask.
    pub highlight: Option<HighlightMask>,
    /// Upper end of the frequency axis; defaults to the largest frequency.
    pub lambda_max: Option<f64>,
    pub width: f64,
    pub height: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            embedding_mode: EmbeddingMode::RwSecondEigvec,
            custom_embedding: None,
            clusters: None,
            bands: None,
            band_colors: None,
            normalization: Normalization::MaxAbs,
            amplitude_scale: 1.0,
            epsilon_support: 0.05,
            support_dot_size: 36.0,
            y_scheme: YScheme::Regular,
            highlight: None,
            lambda_max: None,
            width: 1000.0,
            height: 800.0,
        }
    }
}

impl FigureOptions {
    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::input(format!("{name} must be positive, got {v}")))
            }
        };
        positive("amplitude_scale", self.amplitude_scale)?;
        positive("support_dot_size", self.support_dot_size)?;
        positive("width", self.width)?;
        positive("height", self.height)?;
        if !(0.0..1.0).contains(&self.epsilon_support) {
            return Err(Error::input(format!(
                "epsilon_support must be in [0, 1), got {}",
                self.epsilon_support
            )));
        }
        if let Some(bands) = &self.bands {
            for (b, &(lo, hi)) in bands.iter().enumerate() {
                if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::input(format!("band {b} has lo > hi: ({lo}, {hi})")));
                }
            }
            if let Some(colors) = &self.band_colors {
                check_len(bands.len(), colors.len())?;
            }
        } else if self.band_colors.is_some() {
            return Err(Error::input("band colors given without bands"));
        }
        if let Some(l) = self.lambda_max {
            positive("lambda_max", l)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    /// Gray level 0-255 of the segment (mean of its endpoint magnitudes).
    pub gray: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowModel {
    pub frequency: f64,
    pub baseline_y: f64,
    /// `(x, y, magnitude)` per vertex, in embedding order.
    pub points: Vec<[f64; 3]>,
    pub segments: Vec<Segment>,
    /// Support dots `(x, y)`.
    pub dots: Vec<[f64; 2]>,
    /// Highlighted entries `(x, y)`.
    pub circles: Vec<[f64; 2]>,
    /// `(x_start, y_start, x_end, y_end)`.
    pub connector: [f64; 4],
    /// Index into `bands` of the band tinting this row.
    pub band: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandRect {
    pub lo: f64,
    pub hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub color: [u8; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureModel {
    pub width: f64,
    pub height: f64,
    pub plot_width: f64,
    pub axis_x: f64,
    pub pitch: f64,
    pub dot_radius: f64,
    pub rows: Vec<RowModel>,
    pub bands: Vec<BandRect>,
    pub cluster_bars: Vec<f64>,
    pub embedding_bars: Vec<f64>,
    /// `(lambda, y)` ticks on the frequency axis.
    pub freq_ticks: Vec<[f64; 2]>,
}

impl FigureModel {
    pub fn dot_count(&self) -> usize {
        self.rows.iter().map(|r| r.dots.len()).sum()
    }

    pub fn circle_count(&self) -> usize {
        self.rows.iter().map(|r| r.circles.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("figure model serialises")
    }
}

/// Rescales rows of `h`. Zero rows (or an all-zero matrix for the global
/// scheme) are passed through unchanged with a warning.
pub fn normalize_amplitudes<T: Scalar>(
    h: &DenseMatrix<T>,
    scheme: Normalization,
) -> DenseMatrix<T> {
    let mut out = h.clone();
    let max_abs = |row: &[T]| row.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    match scheme {
        Normalization::OverallMaxAbs => {
            let m = max_abs(h.as_slice());
            if m > T::zero() {
                out = h.map(|v| v / m);
            } else {
                log::warn!("all-zero transform left unnormalized");
            }
        }
        Normalization::L2 | Normalization::MaxAbs => {
            for r in 0..h.rows() {
                let row = out.row_mut(r);
                let d = if scheme == Normalization::L2 {
                    row.iter().map(|&v| v * v).sum::<T>().sqrt()
                } else {
                    max_abs(row)
                };
                if d > T::zero() {
                    for v in row.iter_mut() {
                        *v = *v / d;
                    }
                } else {
                    log::warn!("row {r} is zero and left unnormalized");
                }
            }
        }
    }
    out
}

/// Indices where `|row_i| > epsilon`, ascending.
pub fn support_indices<T: Scalar>(row: &[T], epsilon: T) -> Vec<usize> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > epsilon)
        .map(|(i, _)| i)
        .collect()
}

/// Gray level for a magnitude in `[0, 1]`: 200 at zero down to 0 (black)
/// at one.
pub fn gray_shade(magnitude: f64) -> u8 {
    let m = if magnitude.is_nan() {
        0.0
    } else {
        magnitude.clamp(0.0, 1.0)
    };
    (LIGHT_GRAY * (1.0 - m)).round() as u8
}

/// Index of the band containing `f`. Bands are scanned in increasing order
/// of their lower edge, so a frequency on a shared edge goes to the lower
/// band.
pub fn band_of(f: f64, bands: &[(f64, f64)]) -> Option<usize> {
    let mut idx: Vec<usize> = (0..bands.len()).collect();
    idx.sort_by(|&a, &b| bands[a].0.total_cmp(&bands[b].0).then(a.cmp(&b)));
    idx.into_iter()
        .find(|&b| bands[b].0 <= f && f <= bands[b].1)
}

/// `count` equal bands tiling `[0, lambda_max]`.
pub fn equal_bands(lambda_max: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|b| {
            let lo = lambda_max * b as f64 / count as f64;
            let hi = if b + 1 == count {
                lambda_max
            } else {
                lambda_max * (b + 1) as f64 / count as f64
            };
            (lo, hi)
        })
        .collect()
}

pub fn layout_figure<T: Scalar>(
    t: &Transform<T>,
    g: &Graph<T>,
    opts: &FigureOptions,
) -> Result<FigureModel> {
    opts.validate()?;
    let n = g.n();
    check_len(n, t.cols())?;
    let m = t.rows();
    let highlight = opts.highlight.as_ref().or(t.highlight());
    if let Some(mask) = highlight {
        check_len(m, mask.rows())?;
        check_len(n, mask.cols())?;
    }

    let custom: Option<Vec<T>> = opts
        .custom_embedding
        .as_ref()
        .map(|c| c.iter().map(|&v| T::lit(v)).collect());
    let embedding = embed_1d(g, opts.embedding_mode, custom.as_deref())?;
    let positions: Vec<f64> = embedding.positions().iter().map(|v| v.as_f64()).collect();
    let order = embedding.order();

    let clusters = match &opts.clusters {
        None => None,
        Some(ClusterSpec::Labels(l)) => {
            check_len(n, l.len())?;
            Some(l.clone())
        }
        Some(ClusterSpec::Count(k)) => Some(cluster_kmeans_spectral(g, *k)?),
    };

    let (w, h) = (opts.width, opts.height);
    let plot_width = PLOT_FRACTION * w;
    let axis_x = AXIS_FRACTION * w;
    let (pmin, pmax) = positions
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| {
            (a.min(p), b.max(p))
        });
    let x_of = |v: usize| -> f64 {
        if pmax > pmin {
            (positions[v] - pmin) / (pmax - pmin) * plot_width
        } else {
            plot_width / 2.0
        }
    };

    let frequencies: Vec<f64> = t.frequencies().iter().map(|f| f.as_f64()).collect();
    let lambda_max = opts
        .lambda_max
        .unwrap_or_else(|| frequencies.iter().copied().fold(0.0, f64::max));
    let lambda_max = if lambda_max > 0.0 { lambda_max } else { 1.0 };
    let y_freq = |f: f64| f / lambda_max * h;

    let pitch = if m > 0 { h / m as f64 } else { h };
    let half = pitch / 2.0;
    let amplitude = half * opts.amplitude_scale;

    let bands = opts.bands.clone().unwrap_or_default();
    let colors: Vec<[u8; 3]> = match &opts.band_colors {
        Some(c) => c.clone(),
        None => (0..bands.len())
            .map(|b| DEFAULT_PALETTE[b % DEFAULT_PALETTE.len()])
            .collect(),
    };

    let normalized = normalize_amplitudes(&t.matrix().cast::<f64>(), opts.normalization);
    let rows = (0..m)
        .map(|r| {
            let values = normalized.row(r);
            let frequency = frequencies[r];
            let baseline_y = match opts.y_scheme {
                YScheme::Regular => r as f64 * pitch + half,
                YScheme::Freq => half + frequency / lambda_max * (h - pitch),
            };
            let point = |v: usize| [x_of(v), baseline_y + values[v] * amplitude, values[v].abs()];
            let points: Vec<[f64; 3]> = order.iter().map(|&v| point(v)).collect();
            let segments = points
                .windows(2)
                .map(|p| Segment {
                    x0: p[0][0],
                    y0: p[0][1],
                    x1: p[1][0],
                    y1: p[1][1],
                    gray: gray_shade((p[0][2] + p[1][2]) / 2.0),
                })
                .collect();
            let dots = support_indices(values, opts.epsilon_support)
                .into_iter()
                .map(|v| {
                    let p = point(v);
                    [p[0], p[1]]
                })
                .collect();
            let circles = highlight
                .map(|mask| {
                    mask.row_indices(r)
                        .into_iter()
                        .map(|v| {
                            let p = point(v);
                            [p[0], p[1]]
                        })
                        .collect()
                })
                .unwrap_or_default();
            RowModel {
                frequency,
                baseline_y,
                points,
                segments,
                dots,
                circles,
                connector: [plot_width, baseline_y, axis_x, y_freq(frequency)],
                band: band_of(frequency, &bands),
            }
        })
        .collect();

    let band_rects = bands
        .iter()
        .zip(&colors)
        .map(|(&(lo, hi), &color)| BandRect {
            lo,
            hi,
            y_lo: y_freq(lo),
            y_hi: y_freq(hi),
            color,
        })
        .collect();

    let cluster_bars = clusters
        .map(|labels| {
            order
                .windows(2)
                .filter(|p| labels[p[0]] != labels[p[1]])
                .map(|p| (x_of(p[0]) + x_of(p[1])) / 2.0)
                .collect()
        })
        .unwrap_or_default();

    const TICKS: usize = 4;
    let freq_ticks = (0..=TICKS)
        .map(|i| {
            let l = lambda_max * i as f64 / TICKS as f64;
            [l, y_freq(l)]
        })
        .collect();

    Ok(FigureModel {
        width: w,
        height: h,
        plot_width,
        axis_x,
        pitch,
        dot_radius: opts.support_dot_size.sqrt() / 6.0,
        rows,
        bands: band_rects,
        cluster_bars,
        embedding_bars: order.iter().map(|&v| x_of(v)).collect(),
        freq_ticks,
    })
}
