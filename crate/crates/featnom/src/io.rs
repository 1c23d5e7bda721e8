//! Text formats: weighted edge lists, vertex-feature tables, vertex and pair
//! lists, featured graphs, and CSV outputs.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use featnom_core::featured_graph::{FeaturedGraph, Symbol};
use featnom_core::gmm_nominate::NominationResult;
use featnom_core::spectral::{EmbeddingFrame, WeightedAdjacency};
use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-empty, non-comment lines split on whitespace and commas, with their
/// 1-based line numbers.
fn token_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::parse(path, line, format!("invalid {what} `{token}`")))
}

/// One line of a weighted edge list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub line: usize,
}

/// Reads `u v [weight]` lines; the weight defaults to 1. Lines may use
/// commas or whitespace and `#` starts a comment.
pub fn read_edge_list(path: &Path) -> Result<Vec<WeightedEdge>> {
    let text = read_to_string(path)?;
    let mut edges = Vec::new();
    for (line, tokens) in token_lines(&text) {
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::parse(path, line, "expected `u v [weight]`"));
        }
        let u = parse_field(path, line, tokens[0], "vertex")?;
        let v = parse_field(path, line, tokens[1], "vertex")?;
        let weight: f64 = match tokens.get(2) {
            Some(t) => parse_field(path, line, t, "weight")?,
            None => 1.0,
        };
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::parse(path, line, format!("weight {weight} must be finite and nonnegative")));
        }
        edges.push(WeightedEdge { u, v, weight, line });
    }
    Ok(edges)
}

/// Largest vertex id in an edge list, plus one.
pub fn edge_list_order(edges: &[WeightedEdge]) -> usize {
    edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0)
}

/// Symmetric adjacency on `n` vertices: directed duplicates keep the larger
/// weight and self-loops are dropped.
pub fn adjacency_from_edges(path: &Path, edges: &[WeightedEdge], n: usize) -> Result<WeightedAdjacency> {
    if let Some(e) = edges.iter().find(|e| e.u >= n || e.v >= n) {
        return Err(Error::parse(path, e.line, format!("vertex out of range for {n} vertices")));
    }
    let triples: Vec<(usize, usize, f64)> = edges.iter().map(|e| (e.u, e.v, e.weight)).collect();
    Ok(WeightedAdjacency::from_weighted_edges(n, &triples)?)
}

/// Writes the upper triangle of `a` as `u v weight` lines.
pub fn write_edge_list(path: &Path, a: &WeightedAdjacency) -> Result<()> {
    let mut out = String::new();
    let m = a.matrix();
    for u in 0..a.n() {
        for v in u + 1..a.n() {
            if m[(u, v)] != 0.0 {
                out.push_str(&format!("{u} {v} {}\n", m[(u, v)]));
            }
        }
    }
    write_string(path, &out)
}

pub(crate) fn write_string(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads one vertex id per line.
pub fn read_vertices(path: &Path) -> Result<Vec<usize>> {
    let text = read_to_string(path)?;
    token_lines(&text)
        .map(|(line, tokens)| {
            if tokens.len() != 1 {
                return Err(Error::parse(path, line, "expected one vertex per line"));
            }
            parse_field(path, line, tokens[0], "vertex")
        })
        .collect()
}

/// Reads `a b` vertex pairs, one per line.
pub fn read_pairs(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = read_to_string(path)?;
    token_lines(&text)
        .map(|(line, tokens)| {
            if tokens.len() != 2 {
                return Err(Error::parse(path, line, "expected a vertex pair"));
            }
            Ok((parse_field(path, line, tokens[0], "vertex")?, parse_field(path, line, tokens[1], "vertex")?))
        })
        .collect()
}

pub fn write_pairs(path: &Path, pairs: &[(usize, usize)]) -> Result<()> {
    let text: String = pairs.iter().map(|(a, b)| format!("{a} {b}\n")).collect();
    write_string(path, &text)
}

pub fn write_vertices(path: &Path, vertices: &[usize]) -> Result<()> {
    let text: String = vertices.iter().map(|v| format!("{v}\n")).collect();
    write_string(path, &text)
}

/// A vertex-feature table with numeric columns; categorical input columns
/// are one-hot encoded.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub columns: Vec<String>,
    pub values: DMatrix<f64>,
}

/// Reads a CSV whose header starts with `vertex`; every vertex `0..n` must
/// appear exactly once. Columns that do not parse as numbers are treated as
/// categories and one-hot encoded, categories in sorted order.
pub fn read_features(path: &Path) -> Result<FeatureTable> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.first().map(String::as_str) != Some("vertex") || header.len() < 2 {
        return Err(Error::parse(path, 1, "header must be `vertex,<feature>...`"));
    }
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::parse(path, line, format!("expected {} fields", header.len())));
        }
        let v: usize = parse_field(path, line, &record[0], "vertex")?;
        rows.push((v, record.iter().skip(1).map(str::to_owned).collect()));
    }
    let n = rows.len();
    let mut order = vec![usize::MAX; n];
    for (i, (v, _)) in rows.iter().enumerate() {
        if *v >= n || order[*v] != usize::MAX {
            return Err(Error::parse(path, i + 2, format!("vertex ids must be 0..{n}, each once")));
        }
        order[*v] = i;
    }

    let mut columns = Vec::new();
    let mut data: Vec<Vec<f64>> = Vec::new();
    for (c, name) in header.iter().enumerate().skip(1) {
        let cells: Vec<&str> = order.iter().map(|&i| rows[i].1[c - 1].as_str()).collect();
        let numeric: Option<Vec<f64>> = cells.iter().map(|s| s.parse::<f64>().ok().filter(|x| x.is_finite())).collect();
        match numeric {
            Some(values) => {
                columns.push(name.clone());
                data.push(values);
            }
            None => {
                let categories: BTreeSet<&str> = cells.iter().copied().collect();
                for cat in categories {
                    columns.push(format!("{name}={cat}"));
                    data.push(cells.iter().map(|s| if *s == cat { 1.0 } else { 0.0 }).collect());
                }
            }
        }
    }
    let values = DMatrix::from_fn(n, data.len(), |r, c| data[c][r]);
    Ok(FeatureTable { columns, values })
}

/// Writes `vertex,<column>` with one categorical value per vertex.
pub fn write_categories(path: &Path, column: &str, names: &[&str], labels: &[usize]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["vertex", column])?;
    for (v, &l) in labels.iter().enumerate() {
        w.write_record([v.to_string(), names[l].to_owned()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes `vertex,x1,..,xd`.
pub fn write_embedding(path: &Path, frame: &EmbeddingFrame) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["vertex".to_owned()];
    header.extend((1..=frame.d()).map(|c| format!("x{c}")));
    w.write_record(&header)?;
    for (v, row) in frame.matrix().row_iter().enumerate() {
        let mut rec = vec![v.to_string()];
        rec.extend(row.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Column set of nomination CSVs.
pub const NOMINATION_COLUMNS: [&str; 4] = ["rank", "vertex", "distance", "is_truth"];

/// Writes `rank,vertex,distance,is_truth`, ranks 1-based.
pub fn write_nominations(path: &Path, result: &NominationResult, truth: &[usize]) -> Result<()> {
    let truth: BTreeSet<usize> = truth.iter().copied().collect();
    let mut w = csv_writer(path)?;
    w.write_record(NOMINATION_COLUMNS)?;
    for (i, (&v, &d)) in result.ranking().iter().zip(result.distances()).enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string(), d.to_string(), truth.contains(&v).to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a featured graph: a header `n d1 d2`, `n` lines of `d1` vertex
/// symbols, then one line `u v f1 .. f_d2` per edge.
pub fn read_featured_graph(path: &Path) -> Result<FeaturedGraph> {
    let text = read_to_string(path)?;
    let mut lines = token_lines(&text);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(path, 1, "missing header `n d1 d2`"))?;
    if header.len() != 3 {
        return Err(Error::parse(path, line, "header must be `n d1 d2`"));
    }
    let n: usize = parse_field(path, line, header[0], "vertex count")?;
    let d1: usize = parse_field(path, line, header[1], "vertex feature width")?;
    let d2: usize = parse_field(path, line, header[2], "edge feature width")?;
    let mut x = Vec::with_capacity(n * d1);
    for v in 0..n {
        let (line, tokens) = lines.next().ok_or_else(|| Error::parse(path, line, format!("missing features of vertex {v}")))?;
        if tokens.len() != d1 {
            return Err(Error::parse(path, line, format!("expected {d1} vertex features")));
        }
        for t in tokens {
            x.push(Symbol(parse_field(path, line, t, "symbol")?));
        }
    }
    let mut g = FeaturedGraph::edgeless(n, d1, d2, x)?;
    for (line, tokens) in lines {
        if tokens.len() != 2 + d2 {
            return Err(Error::parse(path, line, format!("expected `u v` and {d2} edge features")));
        }
        let u: usize = parse_field(path, line, tokens[0], "vertex")?;
        let v: usize = parse_field(path, line, tokens[1], "vertex")?;
        let row: Vec<Symbol> =
            tokens[2..].iter().map(|t| parse_field(path, line, t, "symbol").map(Symbol)).collect::<Result<_>>()?;
        g.set_edge(u, v, Some(&row)).map_err(|e| Error::parse(path, line, e.to_string()))?;
    }
    Ok(g)
}

/// Writes the format read by [`read_featured_graph`].
pub fn write_featured_graph(path: &Path, g: &FeaturedGraph) -> Result<()> {
    let mut out = Vec::new();
    let mut put = |s: String| out.extend_from_slice(s.as_bytes());
    put(format!("{} {} {}\n", g.n(), g.d1(), g.d2()));
    for v in 0..g.n() {
        let row: Vec<String> = g.vertex_row(v).iter().map(|s| s.0.to_string()).collect();
        put(format!("{}\n", row.join(" ")));
    }
    for (u, v) in g.edges() {
        let mut fields = vec![u.to_string(), v.to_string()];
        fields.extend(g.edge_row(u, v).iter().map(|s| s.expect("edge rows are complete").0.to_string()));
        put(format!("{}\n", fields.join(" ")));
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))
}
