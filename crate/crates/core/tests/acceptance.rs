//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectrascope::figure::{normalize_amplitudes, support_indices};
use spectrascope::sgwt::{DEFAULT_BAND_THRESHOLD, DEFAULT_SCALES, DEFAULT_SCALE_SPAN, GRID_POINTS};
use spectrascope::toy::TOY_DENSE_CLUSTER;
use spectrascope::{
    chebyshev_filter, design_scales, embed_1d, filter_bands, frame_bounds, greedy_sample,
    make_toy_graph, reconstruct_bandlimited, render_svg, repro, sgwt_transform, DenseMatrix,
    EmbeddingMode, FigureId, Graph, Normalization, OperatorKind, SamplingMethod, Spectrum,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0;

/// Connected random graph: a random spanning path plus Erdos-Renyi edges,
/// weights uniform in (0.1, 2].
fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph<f64> {
    let p: f64 = rng.random_range(0.05..0.5);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut pairs = std::collections::BTreeMap::new();
    for w in perm.windows(2) {
        pairs.insert((w[0].min(w[1]), w[0].max(w[1])), ());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                pairs.insert((i, j), ());
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_keys()
        .map(|(i, j)| (i, j, 2.0 - rng.random_range(0.0..1.9)))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn toy() -> (Graph<f64>, Spectrum<f64>) {
    let g = make_toy_graph::<f64>(SEED);
    let s = Spectrum::of(&g, OperatorKind::Combinatorial).unwrap();
    (g, s)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_orth, mut worst_rec, mut worst_u0) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.random_range(5..=200);
        let g = random_graph(&mut rng, n);
        let l = g.combinatorial_laplacian();
        let s = Spectrum::of(&g, OperatorKind::Combinatorial).map_err(|e| e.to_string())?;
        let u = s.basis();
        let utu = u.transpose().matmul(u).unwrap();
        let orth = utu.sub(&DenseMatrix::identity(n)).unwrap().frobenius_norm();
        let rec = l
            .as_matrix()
            .sub(&s.reconstruct())
            .unwrap()
            .frobenius_norm()
            / l.as_matrix().frobenius_norm();
        let c = (n as f64).sqrt().recip();
        let u0 = s
            .vector(0)
            .iter()
            .map(|v| (v - c).abs())
            .fold(0.0, f64::max);
        ensure(orth <= 1e-10, format!("n={n}: ||U^T U - I||_F = {orth:e}"))?;
        ensure(
            rec <= 1e-8,
            format!("n={n}: relative reconstruction {rec:e}"),
        )?;
        ensure(
            s.eigvals()[0] == 0.0,
            format!("n={n}: lambda_0 = {:e}", s.eigvals()[0]),
        )?;
        ensure(u0 <= 1e-8, format!("n={n}: u_0 deviation {u0:e}"))?;
        worst_orth = worst_orth.max(orth);
        worst_rec = worst_rec.max(rec);
        worst_u0 = worst_u0.max(u0);
    }
    Ok(format!(
        "50 graphs: max orth {worst_orth:.1e}, max rel rec {worst_rec:.1e}, max u0 dev {worst_u0:.1e}"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=60);
        let g = random_graph(&mut rng, n);
        let x = random_signal(&mut rng, n);
        let edge_form = g.laplacian_quadratic_form(&x).unwrap();
        let lx = g.combinatorial_laplacian().matvec(&x).unwrap();
        let matrix_form: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
        let rel = (edge_form - matrix_form).abs() / matrix_form.abs().max(1.0);
        ensure(rel <= 1e-10, format!("n={n}: relative difference {rel:e}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("100 pairs: max relative difference {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let graphs: Vec<Spectrum<f64>> = (0..5)
        .map(|_| {
            let n = rng.random_range(5..=80);
            Spectrum::of(&random_graph(&mut rng, n), OperatorKind::Combinatorial).unwrap()
        })
        .collect();
    let (mut worst_parseval, mut worst_round) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let s = &graphs[i % graphs.len()];
        let x = random_signal(&mut rng, s.n());
        let xhat = s.gft(&x).unwrap();
        let back = s.igft(&xhat).unwrap();
        let parseval = (norm(&xhat) - norm(&x)).abs();
        let round = max_abs_diff(&back, &x);
        ensure(parseval <= 1e-10, format!("Parseval defect {parseval:e}"))?;
        ensure(round <= 1e-10, format!("round-trip error {round:e}"))?;
        worst_parseval = worst_parseval.max(parseval);
        worst_round = worst_round.max(round);
    }
    Ok(format!(
        "100 signals: Parseval {worst_parseval:.1e}, round trip {worst_round:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let (g, s) = toy();
    let n = g.n();
    let lmax = s.lambda_max();
    let d = design_scales(lmax, DEFAULT_SCALES, DEFAULT_SCALE_SPAN).unwrap();

    // (a) frame bounds
    let (a, b) = frame_bounds(&d);
    ensure(a > 1e-3, format!("(a) frame lower bound A = {a:e}"))?;

    // (b) every atom against the explicit superposition sum
    let order: Vec<usize> = (0..n).collect();
    let t = sgwt_transform(&s, &d, &order).unwrap();
    ensure(t.rows() == 216, format!("(b) {} atoms", t.rows()))?;
    let u = s.basis();
    let mut worst_sup = 0.0f64;
    for f in 0..d.num_filters() {
        for i in 0..n {
            let row = t.matrix().row(f * n + i);
            let mut expected = vec![0.0; n];
            for k in 0..n {
                let c = d.filter(f, s.eigvals()[k]) * u[(i, k)];
                for v in 0..n {
                    expected[v] += c * u[(v, k)];
                }
            }
            worst_sup = worst_sup.max(max_abs_diff(row, &expected));
            let mut delta = vec![0.0; n];
            delta[i] = 1.0;
            let filtered = s.apply_spectral_filter(|l| d.filter(f, l), &delta).unwrap();
            worst_sup = worst_sup.max(max_abs_diff(row, &filtered));
        }
    }
    ensure(
        worst_sup <= 1e-10,
        format!("(b) superposition error {worst_sup:e}"),
    )?;

    // (c) Chebyshev order 50 against exact filtering, every scale reported;
    // the criterion is evaluated on the finest scale
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = random_signal(&mut rng, n);
    let mut errors = Vec::new();
    for f in 1..d.num_filters() {
        let exact = s.apply_spectral_filter(|l| d.filter(f, l), &x).unwrap();
        let approx = chebyshev_filter(
            &g,
            OperatorKind::Combinatorial,
            |l| d.filter(f, l),
            50,
            &x,
            lmax,
        )
        .unwrap();
        let diff: Vec<f64> = approx
            .iter()
            .zip(exact.iter())
            .map(|(p, q)| p - q)
            .collect();
        errors.push(norm(&diff) / norm(&exact));
    }
    let mother = {
        let exact = s.apply_spectral_filter(|l| d.kernel(l), &x).unwrap();
        let approx = chebyshev_filter(
            &g,
            OperatorKind::Combinatorial,
            |l| d.kernel(l),
            50,
            &x,
            lmax,
        )
        .unwrap();
        let diff: Vec<f64> = approx
            .iter()
            .zip(exact.iter())
            .map(|(p, q)| p - q)
            .collect();
        norm(&diff) / norm(&exact)
    };
    let finest = *errors.last().unwrap();
    let per_scale: Vec<String> = errors.iter().map(|e| format!("{e:.1e}")).collect();
    ensure(
        finest <= 1e-3,
        format!("(c) finest-scale Chebyshev error {finest:e} (per scale {per_scale:?})"),
    )?;

    // (d) interior peaks have non-empty bands
    let grid = d.grid();
    let bands = filter_bands(&d, DEFAULT_BAND_THRESHOLD);
    let mut interior = 0;
    for (m, &t_m) in d.scales().iter().enumerate() {
        let peak = (0..GRID_POINTS).fold(0, |best, i| {
            if d.kernel(t_m * grid[i]) > d.kernel(t_m * grid[best]) {
                i
            } else {
                best
            }
        });
        if peak > 0 && peak < GRID_POINTS - 1 {
            interior += 1;
            ensure(
                bands[m].is_some(),
                format!("(d) scale {m} has an empty band"),
            )?;
        }
    }
    Ok(format!(
        "A = {a:.4}, B = {b:.4}; superposition {worst_sup:.1e}; Chebyshev finest scale {finest:.1e} (coarse to fine: {}; unscaled g: {mother:.1e}); {interior} interior bands non-empty",
        per_scale.join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let (g, s) = toy();
    let n = g.n();
    let labels = g.clusters().unwrap();
    let clusters = labels.iter().max().unwrap() + 1;

    let gft = normalize_amplitudes(&s.basis().transpose(), Normalization::MaxAbs);
    let excluded =
        |support: &[usize]| (0..clusters).find(|&c| support.iter().all(|&v| labels[v] != c));
    let top = (3 * n) / 4;
    let localized: Vec<(usize, usize)> = (top..n)
        .filter_map(|k| excluded(&support_indices(gft.row(k), 0.05)).map(|c| (k, c)))
        .collect();
    ensure(
        !localized.is_empty(),
        "no top-quartile GFT vector misses a whole cluster",
    )?;

    let order = embed_1d(&g, EmbeddingMode::RwSecondEigvec, None)
        .unwrap()
        .order();
    let d = design_scales(s.lambda_max(), DEFAULT_SCALES, DEFAULT_SCALE_SPAN).unwrap();
    let t = sgwt_transform(&s, &d, &order).unwrap();
    let h = normalize_amplitudes(t.matrix(), Normalization::OverallMaxAbs);
    let finest = d.num_scales();
    let vanishing: Vec<usize> = (0..n)
        .map(|p| (order[p], finest * n + p))
        .filter(|&(center, row)| {
            labels[center] != TOY_DENSE_CLUSTER && support_indices(h.row(row), 0.05).is_empty()
        })
        .map(|(center, _)| center)
        .collect();
    ensure(
        !vanishing.is_empty(),
        "no finest-scale atom outside the dense cluster has empty support",
    )?;
    Ok(format!(
        "{} top-quartile vectors miss a cluster (k, cluster) = {localized:?}; {} vanishing finest-scale atoms outside the dense cluster",
        localized.len(),
        vanishing.len()
    ))
}

fn criterion_6() -> Outcome {
    // proxy objective monotone
    let (g, s) = toy();
    let run = greedy_sample(&s, g.n(), SamplingMethod::default()).unwrap();
    for (l, w) in run.objective.windows(2).enumerate() {
        ensure(
            w[1] >= w[0],
            format!(
                "proxy objective decreases at step {}: {} -> {}",
                l + 1,
                w[0],
                w[1]
            ),
        )?;
    }

    // K3 first pick
    let k3 = Graph::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
    let k3s = Spectrum::of(&k3, OperatorKind::Combinatorial).unwrap();
    for method in [SamplingMethod::default(), SamplingMethod::SigmaMin] {
        let first = greedy_sample(&k3s, 1, method).unwrap().order[0];
        ensure(
            first == 0,
            format!("K3 first pick {first} with {}", method.name()),
        )?;
    }

    // exact bandlimited reconstruction from |S| = bandwidth samples
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..20 {
        let n = rng.random_range(6..=40);
        let gr = random_graph(&mut rng, n);
        let sr = Spectrum::of(&gr, OperatorKind::Combinatorial).unwrap();
        let bw = rng.random_range(1..=n / 2);
        let picks = greedy_sample(&sr, bw, SamplingMethod::SigmaMin).unwrap();
        let sigma = *picks.objective.last().unwrap();
        if sigma <= 1e-6 {
            continue;
        }
        let coef = random_signal(&mut rng, bw);
        let x: Vec<f64> = (0..n)
            .map(|v| (0..bw).map(|k| coef[k] * sr.basis()[(v, k)]).sum())
            .collect();
        let values: Vec<f64> = picks.order.iter().map(|&v| x[v]).collect();
        let rec = reconstruct_bandlimited(&sr, &picks.order, &values, bw).unwrap();
        let err = max_abs_diff(&rec, &x);
        ensure(
            err <= 1e-8,
            format!("n={n}, bandwidth {bw}: reconstruction error {err:e}"),
        )?;
        worst = worst.max(err);
        cases += 1;
    }
    ensure(cases > 0, "no well-conditioned reconstruction case")?;

    // dense cluster keeps being sampled after the others are exhausted
    let labels = g.clusters().unwrap();
    let last_other = run
        .order
        .iter()
        .rposition(|&v| labels[v] != TOY_DENSE_CLUSTER)
        .unwrap();
    let tail = run.order.len() - 1 - last_other;
    ensure(tail > 0, "the last selection belongs to a sparse cluster")?;
    Ok(format!(
        "objective monotone over {} steps; K3 -> 0; {cases} reconstructions, max error {worst:.1e}; {tail} dense-cluster picks after the other clusters are exhausted",
        run.objective.len()
    ))
}

fn criterion_7() -> Outcome {
    let (_, s) = toy();
    let gaps: Vec<f64> = s.eigvals().windows(2).map(|w| w[1] - w[0]).collect();
    let max = gaps.iter().copied().fold(0.0, f64::max);
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    ensure(ratio > 2.0, format!("gap ratio {ratio}"))?;
    Ok(format!(
        "max gap {max:.4}, min gap {min:.2e}, ratio {ratio:.3e}"
    ))
}

fn svg_of(id: FigureId) -> Vec<u8> {
    render_svg(&repro(id, SEED, OperatorKind::Combinatorial).unwrap())
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn count(svg: &[u8], needle: &str) -> usize {
    String::from_utf8_lossy(svg).matches(needle).count()
}

fn criterion_8() -> Outcome {
    for id in [FigureId::Fig3, FigureId::Fig5] {
        let a = svg_of(id);
        ensure(
            a == svg_of(id),
            format!("{} differs between runs", id.name()),
        )?;
        let one = in_pool(1, || svg_of(id));
        let four = in_pool(4, || svg_of(id));
        ensure(
            one == a && four == a,
            format!("{} differs between 1 and 4 threads", id.name()),
        )?;
    }

    let model = repro(FigureId::Fig3, SEED, OperatorKind::Combinatorial).unwrap();
    let svg = render_svg(&model);
    let (g, s) = toy();
    let h = normalize_amplitudes(&s.basis().transpose(), Normalization::MaxAbs);
    let expected_dots: usize = (0..g.n())
        .map(|k| support_indices(h.row(k), 0.05).len())
        .sum();
    let dots = count(&svg, r#"<circle class="dot""#);
    ensure(
        dots == expected_dots,
        format!("{dots} dots, expected {expected_dots}"),
    )?;

    for r in &model.rows {
        for p in &r.points {
            ensure(
                (p[1] - r.baseline_y).abs() <= model.pitch / 2.0 + 1e-9,
                "a row exceeds its half pitch at amplitude_scale 1",
            )?;
        }
    }
    for w in model.rows.windows(2) {
        let top = w[0]
            .points
            .iter()
            .map(|p| p[1])
            .fold(f64::NEG_INFINITY, f64::max);
        let bottom = w[1]
            .points
            .iter()
            .map(|p| p[1])
            .fold(f64::INFINITY, f64::min);
        ensure(top <= bottom + 1e-9, "adjacent rows overlap")?;
    }

    let rows = |svg: &[u8]| count(svg, r#"<g class="row""#);
    let fig2 = rows(&svg_of(FigureId::Fig2));
    let bands = count(&svg, r#"<rect class="band""#);
    let circles = count(&svg, r#"<circle class="highlight""#);
    let fig5 = rows(&svg_of(FigureId::Fig5));
    ensure(fig2 == 8, format!("fig2 has {fig2} rows"))?;
    ensure(bands == 8, format!("fig3 has {bands} band rectangles"))?;
    ensure(fig5 == 216, format!("fig5 has {fig5} rows"))?;
    Ok(format!(
        "deterministic across runs and 1/4 threads; {dots} dots; rows within half pitch; fig2 {fig2} rows, fig3 {bands} bands + {circles} highlights, fig5 {fig5} rows"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("eigendecomposition", criterion_1),
        ("quadratic form oracle", criterion_2),
        ("GFT Parseval and round trip", criterion_3),
        ("SGWT frame, superposition, Chebyshev, bands", criterion_4),
        ("localization", criterion_5),
        ("sampling", criterion_6),
        ("irregular eigenvalue spacing", criterion_7),
        ("rendering", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
