//! File formats: graph JSON, point lists, and CSV dumps of spectra and
//! transform matrices.
//!
//! Graph documents look like
//!
//! ```text
//! {"n": 3, "edges": [[0, 1, 0.5], [1, 2, 1.0]], "coords": null, "clusters": null}
//! ```
//!
//! Weights are written with the shortest decimal form that round-trips, so
//! `save_graph` followed by `load_graph` reproduces every weight bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    coords: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    clusters: Option<Vec<usize>>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

pub fn graph_from_json<T: Scalar>(text: &str) -> Result<Graph<T>> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    for (k, &(i, j, w)) in file.edges.iter().enumerate() {
        let loc = format!("edges[{k}]");
        if i == j {
            return Err(parse_err(loc, format!("self-loop ({i}, {j})")));
        }
        if i > j {
            return Err(parse_err(loc, format!("expected i < j, got ({i}, {j})")));
        }
        if j >= file.n {
            return Err(parse_err(
                loc,
                format!("vertex {j} out of range for n = {}", file.n),
            ));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(parse_err(loc, format!("weight must be positive, got {w}")));
        }
    }
    let mut g = Graph::new(
        file.n,
        file.edges.iter().map(|&(i, j, w)| (i, j, T::lit(w))),
    )
    .map_err(|e| parse_err("edges", e.to_string()))?;
    if let Some(coords) = file.coords {
        g = g
            .with_coords(
                coords
                    .iter()
                    .map(|p| [T::lit(p[0]), T::lit(p[1])])
                    .collect(),
            )
            .map_err(|e| parse_err("coords", e.to_string()))?;
    }
    if let Some(clusters) = file.clusters {
        g = g
            .with_clusters(clusters)
            .map_err(|e| parse_err("clusters", e.to_string()))?;
    }
    Ok(g)
}

fn json_f64(v: f64) -> String {
    serde_json::to_string(&v).expect("finite float serialises")
}

pub fn graph_to_json<T: Scalar>(g: &Graph<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"n\": {},", g.n());
    s.push_str("  \"edges\": [");
    for (k, e) in g.edges().iter().enumerate() {
        let sep = if k == 0 { "\n" } else { ",\n" };
        let _ = write!(
            s,
            "{sep}    [{}, {}, {}]",
            e.i,
            e.j,
            json_f64(e.weight.as_f64())
        );
    }
    s.push_str(if g.edges().is_empty() {
        "],\n"
    } else {
        "\n  ],\n"
    });
    match g.coords() {
        Some(coords) => {
            s.push_str("  \"coords\": [");
            for (k, p) in coords.iter().enumerate() {
                let sep = if k == 0 { "\n" } else { ",\n" };
                let _ = write!(
                    s,
                    "{sep}    [{}, {}]",
                    json_f64(p[0].as_f64()),
                    json_f64(p[1].as_f64())
                );
            }
            s.push_str("\n  ],\n");
        }
        None => s.push_str("  \"coords\": null,\n"),
    }
    match g.clusters() {
        Some(c) => {
            let _ = writeln!(s, "  \"clusters\": {}", serde_json::to_string(c).unwrap());
        }
        None => s.push_str("  \"clusters\": null\n"),
    }
    s.push_str("}\n");
    s
}

pub fn load_graph<T: Scalar>(path: impl AsRef<Path>) -> Result<Graph<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    graph_from_json(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn save_graph<T: Scalar>(g: &Graph<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, graph_to_json(g))?;
    Ok(())
}

/// Splits a numeric text line on commas and/or whitespace.
fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn is_blank_or_comment(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses rows of numbers. A first line that does not parse as numbers is
/// treated as a header and skipped.
pub fn parse_numeric_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if is_blank_or_comment(line) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = fields(line).map(str::parse).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if rows.is_empty() && idx == 0 => continue,
            Err(e) => {
                return Err(parse_err(format!("line {}", idx + 1), e.to_string()));
            }
        }
    }
    Ok(rows)
}

/// Two columns `x, y` per line.
pub fn parse_points(text: &str) -> Result<Vec<[f64; 2]>> {
    parse_numeric_rows(text)?
        .into_iter()
        .enumerate()
        .map(|(k, row)| match row.as_slice() {
            [x, y] => Ok([*x, *y]),
            _ => Err(parse_err(
                format!("point {k}"),
                format!("expected 2 columns, got {}", row.len()),
            )),
        })
        .collect()
}

/// All numbers in the text, in reading order.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    Ok(parse_numeric_rows(text)?.into_iter().flatten().collect())
}

/// 17 significant digits; parses back to the same `f64`.
pub fn format_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// `k,lambda` header followed by one row per eigenvalue.
pub fn spectrum_csv<T: Scalar>(s: &Spectrum<T>) -> String {
    let mut out = String::from("k,lambda\n");
    for (k, &l) in s.eigvals().iter().enumerate() {
        let _ = writeln!(out, "{k},{}", format_full(l.as_f64()));
    }
    out
}

/// One row per basis vector `u_k`, `n` columns each.
pub fn basis_csv<T: Scalar>(s: &Spectrum<T>) -> String {
    matrix_csv(&s.basis().transpose())
}

pub fn matrix_csv<T: Scalar>(m: &DenseMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format_full(v.as_f64())).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let g = Graph::new(3, [(0, 1, 0.1 + 0.2), (1, 2, std::f64::consts::PI / 7.0)])
            .unwrap()
            .with_coords(vec![[0.0, 1.0 / 3.0], [2.5, -1e-300], [1e10, 7.0]])
            .unwrap()
            .with_clusters(vec![0, 0, 1])
            .unwrap();
        let back: Graph<f64> = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(back, g);

        // weights whose shortest representation needs all 17 digits
        let toy = crate::toy::make_toy_graph::<f64>(0);
        assert_eq!(graph_from_json::<f64>(&graph_to_json(&toy)).unwrap(), toy);

        let bare = Graph::<f64>::new(2, []).unwrap();
        assert_eq!(graph_from_json::<f64>(&graph_to_json(&bare)).unwrap(), bare);
    }

    #[test]
    fn self_loop_and_negative_weight_are_rejected_with_context() {
        let err =
            graph_from_json::<f64>(r#"{"n": 3, "edges": [[0, 1, 1.0], [2, 2, 1.0]]}"#).unwrap_err();
        match err {
            Error::Parse { location, message } => {
                assert_eq!(location, "edges[1]");
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = graph_from_json::<f64>(r#"{"n": 3, "edges": [[0, 1, -0.5]]}"#).unwrap_err();
        assert!(err.to_string().contains("weight"));
    }

    #[test]
    fn malformed_json_reports_line() {
        let err = graph_from_json::<f64>("{\n  \"n\": 3,\n  \"edges\": [[0, 1]]\n}").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("line 3")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(graph_from_json::<f64>(r#"{"n": 2, "edges": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn points_with_header_and_comments() {
        let pts = parse_points("x,y\n# comment\n0, 1\n2.5 3\n").unwrap();
        assert_eq!(pts, vec![[0.0, 1.0], [2.5, 3.0]]);
        assert!(parse_points("0,1\n2,x\n").is_err());
        assert!(parse_points("0,1,2\n").is_err());
    }

    #[test]
    fn full_precision_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 6.02e23, 5e-324] {
            assert_eq!(format_full(v).parse::<f64>().unwrap(), v);
        }
    }
}
