use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use spectrascope::figure::{equal_bands, DEFAULT_PALETTE};
use spectrascope::io::{
    basis_csv, load_graph, matrix_csv, parse_points, parse_vector, save_graph, spectrum_csv,
};
use spectrascope::sgwt::{SgwtSidecar, DEFAULT_BAND_THRESHOLD, DEFAULT_SCALES, DEFAULT_SCALE_SPAN};
use spectrascope::{
    build_gaussian_kernel_graph, design_scales, embed_1d, filter_bands, filtered_gft_rows,
    greedy_sample, highlight_from_sampling, layout_figure, make_toy_graph, render_svg, repro,
    sgwt_transform, ClusterSpec, EmbeddingMode, Error, ErrorKind, FigureId, FigureModel,
    FigureOptions, Graph, HighlightMask, OperatorKind, SamplingMethod, Spectrum, Transform,
    WaveletDesign,
};

type Result<T> = std::result::Result<T, Error>;

/// Band intervals with optional per-band colours.
type Bands = (Vec<(f64, f64)>, Option<Vec<[u8; 3]>>);

const OPERATORS: [&str; 2] = ["combinatorial", "normalized"];

#[derive(Parser, Debug)]
#[command(
    name = "spectrascope",
    version,
    about = "Graph Fourier transforms, spectral graph wavelets, sampling sets and stacked-transform figures"
)]
struct Cli {
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)] // parsed once per process
enum Command {
    /// Create graph files.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Write the eigenvalues (and optionally eigenvectors) of a graph operator.
    Spectrum(SpectrumArgs),
    /// Greedy sampling-set selection.
    Sample(SampleArgs),
    /// Dump the SGWT analysis matrix and its metadata.
    Sgwt(SgwtArgs),
    /// Render a stacked-transform figure as SVG.
    #[command(subcommand)]
    Render(RenderCommand),
    /// Regenerate one of the reference figures on the toy graph.
    Repro(ReproArgs),
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// The three-cluster toy graph.
    GenToy {
        #[command(flatten)]
        seed: SeedArg,
        /// Output graph JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Gaussian-kernel graph on 2D points (two columns per line).
    FromPoints {
        /// Points file.
        #[arg(long)]
        points: PathBuf,
        /// Kernel width.
        #[arg(long, default_value_t = 1.5)]
        sigma: f64,
        /// Drop edges whose weight is below this value.
        #[arg(long)]
        cutoff: Option<f64>,
        /// Output graph JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SeedArg {
    /// Random seed.
    #[arg(long, env = "SPECTRASCOPE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph JSON file; the toy graph drawn with --seed when omitted.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
    /// Graph operator to diagonalise.
    #[arg(long, default_value = "combinatorial", value_parser = OPERATORS)]
    operator: String,
}

impl GraphInput {
    fn load(&self) -> Result<(Graph<f64>, Spectrum<f64>)> {
        let g = match &self.graph {
            Some(path) => load_graph::<f64>(path)?,
            None => make_toy_graph::<f64>(self.seed.seed),
        };
        info!("graph: {} vertices, {} edges", g.n(), g.edges().len());
        let s = Spectrum::of(&g, self.operator()?)?;
        Ok((g, s))
    }

    fn operator(&self) -> Result<OperatorKind> {
        self.operator.parse()
    }
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Output CSV of eigenvalues.
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the eigenvectors (row k = u_k) to this CSV.
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Selection procedure.
    #[arg(long, default_value = "proxy", value_parser = ["proxy", "sigma_min"])]
    method: String,
    /// Number of vertices to select; all of them when omitted.
    #[arg(short, long)]
    k: Option<usize>,
    /// Power of the operator used by the spectral proxy.
    #[arg(long, default_value_t = 4)]
    proxy_order: u32,
    /// Output JSON.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct WaveletArgs {
    /// Number of wavelet scales J.
    #[arg(long, default_value_t = DEFAULT_SCALES)]
    scales: usize,
    /// Ratio K between the coarsest and finest scale.
    #[arg(long, default_value_t = DEFAULT_SCALE_SPAN)]
    scale_span: f64,
    /// Fraction of the peak response delimiting each wavelet band.
    #[arg(long, default_value_t = DEFAULT_BAND_THRESHOLD)]
    band_threshold: f64,
}

impl WaveletArgs {
    fn design(&self, s: &Spectrum<f64>) -> Result<WaveletDesign<f64>> {
        design_scales(s.lambda_max(), self.scales, self.scale_span)
    }
}

#[derive(Args, Debug)]
struct SgwtArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    wavelet: WaveletArgs,
    /// Order atom centres along the spectral embedding instead of by index.
    #[arg(long)]
    embedding_order: bool,
    /// Output CSV, one atom per row.
    #[arg(short, long)]
    output: PathBuf,
    /// Metadata JSON; defaults to the output path with a .json extension.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RenderCommand {
    /// Graph Fourier basis, one row per eigenvector.
    Gft(RenderGftArgs),
    /// SGWT atoms, scaling function first.
    Sgwt(RenderSgwtArgs),
    /// Rows f(lambda_k) u_k for each SGWT filter.
    FilteredGft(RenderFilteredArgs),
}

#[derive(Args, Debug)]
struct RenderGftArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Only draw the first N basis vectors.
    #[arg(long)]
    rows: Option<usize>,
    /// Split the spectrum into N equal bands (ignored when --bands is given).
    #[arg(long)]
    equal_bands: Option<usize>,
    #[command(flatten)]
    figure: FigureArgs,
}

#[derive(Args, Debug)]
struct RenderSgwtArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    wavelet: WaveletArgs,
    #[command(flatten)]
    figure: FigureArgs,
}

#[derive(Args, Debug)]
struct RenderFilteredArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    wavelet: WaveletArgs,
    /// Single filter to draw (0 = scaling function); all filters when omitted.
    #[arg(long)]
    filter: Option<usize>,
    #[command(flatten)]
    figure: FigureArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Horizontal vertex placement.
    #[arg(long, default_value = "rw_second_eigvec", value_parser = ["rw_second_eigvec", "regular_rank", "custom"])]
    embedding: String,
    /// Vertex positions for --embedding custom, one number per vertex.
    #[arg(long)]
    custom_embedding: Option<PathBuf>,
    /// Cluster vertices with spectral k-means into N groups (default: the graph's own labels).
    #[arg(long)]
    clusters: Option<usize>,
    /// Spectral bands as comma-separated lo:hi pairs.
    #[arg(long)]
    bands: Option<String>,
    /// Band colours as comma-separated #rrggbb values.
    #[arg(long)]
    band_colors: Option<String>,
    /// Per-row amplitude normalisation.
    #[arg(long, default_value = "max_abs", value_parser = ["l2", "max_abs", "overall_max_abs"])]
    amplitude_normalization: String,
    /// Vertical amplitude of each row relative to the row spacing.
    #[arg(long, default_value_t = 1.0)]
    amplitude_scale: f64,
    /// Normalised magnitude above which a vertex gets a support dot.
    #[arg(long, default_value_t = 0.05)]
    epsilon_support: f64,
    /// Area of the support dots.
    #[arg(long, default_value_t = 36.0)]
    support_scatter_size: f64,
    /// Vertical placement of rows.
    #[arg(long, default_value = "regular", value_parser = ["regular", "freq"])]
    graph_signal_y_scheme: String,
    /// Circled vertices: the transform's own (default), none, or a greedy sampling run.
    #[arg(long, default_value = "default", value_parser = ["default", "none", "proxy", "sigma_min"])]
    highlight: String,
    /// Upper end of the frequency axis (default: the largest frequency).
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Canvas width.
    #[arg(long, default_value_t = 1000.0)]
    width: f64,
    /// Canvas height.
    #[arg(long, default_value_t = 800.0)]
    height: f64,
    /// Output SVG.
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the layout model as JSON.
    #[arg(long)]
    model_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// Figure to regenerate.
    #[arg(value_parser = ["fig2", "fig3", "fig5", "fig6"])]
    figure: String,
    #[command(flatten)]
    seed: SeedArg,
    /// Graph operator to diagonalise.
    #[arg(long, default_value = "combinatorial", value_parser = OPERATORS)]
    operator: String,
    /// Output SVG; defaults to <figure>.svg.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the layout model as JSON.
    #[arg(long)]
    model_json: Option<PathBuf>,
}

#[derive(Serialize)]
struct SampleReport<'a> {
    method: &'static str,
    order: &'a [usize],
    objective: &'a [f64],
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes)?;
    info!("wrote {}", path.display());
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_bands(spec: &str) -> Result<Vec<(f64, f64)>> {
    spec.split(',')
        .map(|pair| {
            let (lo, hi) = pair
                .split_once(':')
                .ok_or_else(|| input_error(format!("band '{pair}' is not lo:hi")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| input_error(format!("band '{pair}': {e}")))
            };
            Ok((num(lo)?, num(hi)?))
        })
        .collect()
}

fn parse_color(spec: &str) -> Result<[u8; 3]> {
    let hex = spec.trim().trim_start_matches('#');
    let bad = || input_error(format!("colour '{spec}' is not #rrggbb"));
    if hex.len() != 6 {
        return Err(bad());
    }
    let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
    Ok([byte(0)?, byte(2)?, byte(4)?])
}

impl FigureArgs {
    /// Resolves the flags into layout options. `bands` are the command's
    /// own bands, used when --bands is absent.
    fn options(&self, g: &Graph<f64>, bands: Option<Bands>) -> Result<FigureOptions> {
        let embedding_mode: EmbeddingMode = self.embedding.parse()?;
        let custom_embedding = match &self.custom_embedding {
            Some(path) => Some(parse_vector(&read(path)?)?),
            None if embedding_mode == EmbeddingMode::Custom => {
                return Err(input_error("--embedding custom needs --custom-embedding"))
            }
            None => None,
        };
        let clusters = match self.clusters {
            Some(k) => Some(ClusterSpec::Count(k)),
            None => g.clusters().map(|c| ClusterSpec::Labels(c.to_vec())),
        };
        let (bands, mut band_colors) = match &self.bands {
            Some(spec) => (Some(parse_bands(spec)?), None),
            None => match bands {
                Some((b, c)) => (Some(b), c),
                None => (None, None),
            },
        };
        if let Some(spec) = &self.band_colors {
            band_colors = Some(spec.split(',').map(parse_color).collect::<Result<_>>()?);
        }
        Ok(FigureOptions {
            embedding_mode,
            custom_embedding,
            clusters,
            bands,
            band_colors,
            normalization: self.amplitude_normalization.parse()?,
            amplitude_scale: self.amplitude_scale,
            epsilon_support: self.epsilon_support,
            support_dot_size: self.support_scatter_size,
            y_scheme: self.graph_signal_y_scheme.parse()?,
            highlight: None,
            lambda_max: self.lambda_max,
            width: self.width,
            height: self.height,
        })
    }

    /// Applies --highlight to `t`.
    fn highlight(
        &self,
        s: &Spectrum<f64>,
        t: Transform<f64>,
    ) -> Result<(Transform<f64>, Option<HighlightMask>)> {
        let method = match self.highlight.as_str() {
            "default" => return Ok((t, None)),
            "none" => {
                let mask = HighlightMask::new(t.rows(), t.cols());
                return Ok((t, Some(mask)));
            }
            "sigma_min" => SamplingMethod::SigmaMin,
            _ => SamplingMethod::default(),
        };
        let k = t.rows().min(s.n());
        let run = greedy_sample(s, k, method)?;
        let mask = highlight_from_sampling(&run, t.rows(), t.cols())?;
        Ok((t, Some(mask)))
    }

    fn render(
        &self,
        g: &Graph<f64>,
        s: &Spectrum<f64>,
        t: Transform<f64>,
        bands: Option<Bands>,
    ) -> Result<()> {
        let mut opts = self.options(g, bands)?;
        let (t, mask) = self.highlight(s, t)?;
        opts.highlight = mask;
        let model = layout_figure(&t, g, &opts)?;
        emit_figure(&model, &self.output, self.model_json.as_deref())
    }
}

fn emit_figure(model: &FigureModel, svg: &Path, json: Option<&Path>) -> Result<()> {
    info!(
        "figure: {} rows, {} support dots, {} highlights",
        model.rows.len(),
        model.dot_count(),
        model.circle_count()
    );
    write(svg, render_svg(model))?;
    if let Some(path) = json {
        write(path, model.to_json())?;
    }
    Ok(())
}

/// Non-empty wavelet bands, coloured by scale index.
fn wavelet_bands(d: &WaveletDesign<f64>, threshold: f64) -> Bands {
    let (bands, colors) = filter_bands(d, threshold)
        .into_iter()
        .enumerate()
        .filter_map(|(m, b)| b.map(|b| (b, DEFAULT_PALETTE[m % DEFAULT_PALETTE.len()])))
        .unzip();
    (bands, Some(colors))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Graph(GraphCommand::GenToy { seed, output }) => {
            let g = make_toy_graph::<f64>(seed.seed);
            save_graph(&g, &output)?;
            info!("wrote {} ({} vertices)", output.display(), g.n());
        }
        Command::Graph(GraphCommand::FromPoints {
            points,
            sigma,
            cutoff,
            output,
        }) => {
            let pts = parse_points(&read(&points)?)?;
            let g = build_gaussian_kernel_graph(&pts, sigma, cutoff)?;
            save_graph(&g, &output)?;
            info!("wrote {} ({} edges)", output.display(), g.edges().len());
        }
        Command::Spectrum(args) => {
            let (_, s) = args.input.load()?;
            write(&args.output, spectrum_csv(&s))?;
            if let Some(path) = &args.basis {
                write(path, basis_csv(&s))?;
            }
        }
        Command::Sample(args) => {
            let (_, s) = args.input.load()?;
            let method = match args.method.as_str() {
                "sigma_min" => SamplingMethod::SigmaMin,
                _ => SamplingMethod::Proxy {
                    order: args.proxy_order,
                },
            };
            let r = greedy_sample(&s, args.k.unwrap_or(s.n()), method)?;
            let report = SampleReport {
                method: method.name(),
                order: &r.order,
                objective: &r.objective,
            };
            let json =
                serde_json::to_string(&report).map_err(|e| Error::Numerical(e.to_string()))?;
            write(&args.output, json + "\n")?;
        }
        Command::Sgwt(args) => {
            let (g, s) = args.input.load()?;
            let d = args.wavelet.design(&s)?;
            let order: Vec<usize> = if args.embedding_order {
                embed_1d(&g, EmbeddingMode::RwSecondEigvec, None)?.order()
            } else {
                (0..g.n()).collect()
            };
            let t = sgwt_transform(&s, &d, &order)?;
            write(&args.output, matrix_csv(t.matrix()))?;
            let sidecar = SgwtSidecar::new(&d, &t, args.wavelet.band_threshold);
            let path = args
                .sidecar
                .unwrap_or_else(|| args.output.with_extension("json"));
            let text = serde_json::to_string_pretty(&sidecar)
                .map_err(|e| Error::Numerical(e.to_string()))?;
            write(&path, text + "\n")?;
        }
        Command::Render(RenderCommand::Gft(args)) => {
            let (g, s) = args.input.load()?;
            let mut t = Transform::gft(&s);
            if let Some(rows) = args.rows {
                if rows == 0 || rows > s.n() {
                    return Err(input_error(format!("--rows must be in 1..={}", s.n())));
                }
                t = t.top_rows(rows);
            }
            let bands = args
                .equal_bands
                .map(|count| (equal_bands(s.lambda_max(), count), None));
            args.figure.render(&g, &s, t, bands)?;
        }
        Command::Render(RenderCommand::Sgwt(args)) => {
            let (g, s) = args.input.load()?;
            let d = args.wavelet.design(&s)?;
            let order = embed_1d(&g, EmbeddingMode::RwSecondEigvec, None)?.order();
            let t = sgwt_transform(&s, &d, &order)?;
            let bands = wavelet_bands(&d, args.wavelet.band_threshold);
            args.figure.render(&g, &s, t, Some(bands))?;
        }
        Command::Render(RenderCommand::FilteredGft(args)) => {
            let (g, s) = args.input.load()?;
            let d = args.wavelet.design(&s)?;
            let t = match args.filter {
                Some(f) => filtered_gft_rows(&s, &d, f)?,
                None => {
                    let parts = (0..d.num_filters())
                        .map(|f| filtered_gft_rows(&s, &d, f))
                        .collect::<Result<Vec<_>>>()?;
                    Transform::stack(&parts)?
                }
            };
            let bands = wavelet_bands(&d, args.wavelet.band_threshold);
            args.figure.render(&g, &s, t, Some(bands))?;
        }
        Command::Repro(args) => {
            let id: FigureId = args.figure.parse()?;
            let operator: OperatorKind = args.operator.parse()?;
            let model = repro(id, args.seed.seed, operator)?;
            let output = args
                .output
                .unwrap_or_else(|| PathBuf::from(format!("{}.svg", id.name())));
            emit_figure(&model, &output, args.model_json.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Info
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Input => ExitCode::from(2),
                ErrorKind::Numerical => ExitCode::from(3),
            }
        }
    }
}
