//! Deterministic SVG serialisation of a [`FigureModel`].
//!
//! Elements are written in a fixed order (bands, embedding bars, cluster
//! bars, rows bottom to top, dots, highlight circles, connectors, axis) and
//! every number is printed with exactly four decimals, so equal models give
//! byte-identical documents.

use std::fmt::Write as _;

use super::{FigureModel, LIGHT_GRAY};

const MARGIN: f64 = 20.0;
const BAND_HALF_WIDTH: f64 = 8.0;
const TINT_OPACITY: f64 = 0.15;
const HIGHLIGHT_SCALE: f64 = 2.5;

/// Four decimals; negative zero is printed as zero.
fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn rgb(c: [u8; 3]) -> String {
    format!("rgb({},{},{})", c[0], c[1], c[2])
}

fn gray(level: u8) -> String {
    rgb([level; 3])
}

pub fn render_svg(m: &FigureModel) -> Vec<u8> {
    // model coordinates are y-up
    let y = |v: f64| num(m.height - v);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(m.width + 2.0 * MARGIN),
        num(m.height + 2.0 * MARGIN),
        num(-MARGIN),
        num(-MARGIN),
        num(m.width + 2.0 * MARGIN),
        num(m.height + 2.0 * MARGIN),
    );

    // bands: rectangles on the frequency axis, then tints behind rows
    for b in &m.bands {
        let _ = writeln!(
            s,
            r#"<rect class="band" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            num(m.axis_x - BAND_HALF_WIDTH),
            y(b.y_hi),
            num(2.0 * BAND_HALF_WIDTH),
            num(b.y_hi - b.y_lo),
            rgb(b.color),
        );
    }
    for r in &m.rows {
        if let Some(b) = r.band.and_then(|b| m.bands.get(b)) {
            let _ = writeln!(
                s,
                r#"<rect class="band-tint" x="0.0000" y="{}" width="{}" height="{}" fill="{}" fill-opacity="{}"/>"#,
                y(r.baseline_y + m.pitch / 2.0),
                num(m.plot_width),
                num(m.pitch),
                rgb(b.color),
                num(TINT_OPACITY),
            );
        }
    }

    let light = gray(LIGHT_GRAY as u8);
    for &x in &m.embedding_bars {
        let _ = writeln!(
            s,
            r#"<line class="embedding-bar" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="{light}" stroke-width="0.5000"/>"#,
            y(0.0),
            y(m.height),
            x = num(x),
        );
    }
    for &x in &m.cluster_bars {
        let _ = writeln!(
            s,
            r#"<line class="cluster-bar" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="rgb(0,0,0)" stroke-width="1.5000" stroke-dasharray="4.0000,3.0000"/>"#,
            y(0.0),
            y(m.height),
            x = num(x),
        );
    }

    for (i, r) in m.rows.iter().enumerate() {
        let _ = writeln!(s, r#"<g class="row" data-row="{i}">"#);
        let _ = writeln!(
            s,
            r#"<line class="zero-line" x1="0.0000" y1="{b}" x2="{}" y2="{b}" stroke="{light}" stroke-width="0.5000"/>"#,
            num(m.plot_width),
            b = y(r.baseline_y),
        );
        for seg in &r.segments {
            let _ = writeln!(
                s,
                r#"<line class="segment" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.0000"/>"#,
                num(seg.x0),
                y(seg.y0),
                num(seg.x1),
                y(seg.y1),
                gray(seg.gray),
            );
        }
        s.push_str("</g>\n");
    }

    for r in &m.rows {
        for d in &r.dots {
            let _ = writeln!(
                s,
                r#"<circle class="dot" cx="{}" cy="{}" r="{}" fill="rgb(0,0,0)"/>"#,
                num(d[0]),
                y(d[1]),
                num(m.dot_radius),
            );
        }
    }
    for r in &m.rows {
        for c in &r.circles {
            let _ = writeln!(
                s,
                r#"<circle class="highlight" cx="{}" cy="{}" r="{}" fill="none" stroke="rgb(220,20,20)" stroke-width="1.0000"/>"#,
                num(c[0]),
                y(c[1]),
                num(m.dot_radius * HIGHLIGHT_SCALE),
            );
        }
    }
    for r in &m.rows {
        let [x0, y0, x1, y1] = r.connector;
        let _ = writeln!(
            s,
            r#"<line class="connector" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{light}" stroke-width="0.5000"/>"#,
            num(x0),
            y(y0),
            num(x1),
            y(y1),
        );
    }

    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="rgb(0,0,0)" stroke-width="1.0000"/>"#,
        y(0.0),
        y(m.height),
        x = num(m.axis_x),
    );
    for t in &m.freq_ticks {
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{}" y1="{ty}" x2="{}" y2="{ty}" stroke="rgb(0,0,0)" stroke-width="1.0000"/>"#,
            num(m.axis_x),
            num(m.axis_x + 5.0),
            ty = y(t[1]),
        );
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{}" y="{}" font-size="10.0000" dominant-baseline="middle">{}</text>"#,
            num(m.axis_x + 8.0),
            y(t[1]),
            num(t[0]),
        );
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}
