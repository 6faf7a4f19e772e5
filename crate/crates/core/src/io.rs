//! Plain-text formats.
//!
//! * edge list: `u v [w]` per line
//! * features: whitespace-separated reals per line
//! * labels: `node_id class_name` per line, class names numbered by first appearance
//! * partition: `node_id class_index` per line
//!
//! In every format `#` starts a comment line and blank lines are skipped.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::eval::Partition;
use crate::graph::{FeatureSet, Graph};
use crate::ssl::LabelSet;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-comment lines as `(1-based line number, fields)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_err(source: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        msg: msg.into(),
    }
}

pub fn parse_edge_list(text: &str, source: &str, allow_self_loops: bool) -> Result<Graph> {
    let mut entries = Vec::new();
    for (line, fields) in records(text) {
        let weight = match fields.as_slice() {
            [_, _] => None,
            [_, _, w] => Some(
                w.parse::<f64>()
                    .map_err(|_| parse_err(source, line, format!("bad weight {w:?}")))?,
            ),
            _ => return Err(parse_err(source, line, "expected `u v [w]`")),
        };
        if let Some(w) = weight {
            if !(w.is_finite() && w > 0.0) {
                return Err(parse_err(source, line, format!("weight must be positive, got {w}")));
            }
        }
        entries.push((fields[0].to_string(), fields[1].to_string(), weight));
    }
    if entries.is_empty() {
        return Err(parse_err(source, 0, "no edges"));
    }
    Graph::from_edge_list(entries, allow_self_loops)
}

pub fn read_edge_list(path: &Path, allow_self_loops: bool) -> Result<Graph> {
    parse_edge_list(&read(path)?, &path.display().to_string(), allow_self_loops)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (i, j, w) in g.edges() {
        if w == 1.0 {
            writeln!(out, "{} {}", g.id(i), g.id(j))?;
        } else {
            writeln!(out, "{} {} {}", g.id(i), g.id(j), w)?;
        }
    }
    Ok(())
}

pub fn parse_features(text: &str, source: &str) -> Result<FeatureSet> {
    let mut rows = Vec::new();
    for (line, fields) in records(text) {
        let row = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(source, line, e.to_string()))?;
        rows.push(row);
    }
    FeatureSet::new(rows)
}

pub fn read_features(path: &Path) -> Result<FeatureSet> {
    parse_features(&read(path)?, &path.display().to_string())
}

/// A label set together with the names of its classes.
#[derive(Debug, Clone)]
pub struct NamedLabels {
    pub labels: LabelSet,
    pub class_names: Vec<String>,
}

/// Parses `node_id class_name` lines against `g`'s node ids.
pub fn parse_labels(text: &str, source: &str, g: &Graph) -> Result<NamedLabels> {
    let mut class_names: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    for (line, fields) in records(text) {
        let [node, class] = fields.as_slice() else {
            return Err(parse_err(source, line, "expected `node_id class_name`"));
        };
        let node = g
            .index_of(node)
            .ok_or_else(|| parse_err(source, line, format!("unknown node {node:?}")))?;
        let class = match class_names.iter().position(|c| c == class) {
            Some(c) => c,
            None => {
                class_names.push(class.to_string());
                class_names.len() - 1
            }
        };
        pairs.push((node, class));
    }
    let labels = LabelSet::from_pairs(class_names.len(), pairs)?;
    Ok(NamedLabels {
        labels,
        class_names,
    })
}

pub fn read_labels(path: &Path, g: &Graph) -> Result<NamedLabels> {
    parse_labels(&read(path)?, &path.display().to_string(), g)
}

/// Parses `node_id class_index` lines; every node of `g` must appear.
pub fn parse_partition(text: &str, source: &str, g: &Graph) -> Result<Partition> {
    let mut assignment: Vec<Option<usize>> = vec![None; g.node_count()];
    for (line, fields) in records(text) {
        let [node, class] = fields.as_slice() else {
            return Err(parse_err(source, line, "expected `node_id class_index`"));
        };
        let i = g
            .index_of(node)
            .ok_or_else(|| parse_err(source, line, format!("unknown node {node:?}")))?;
        let c = class
            .parse::<usize>()
            .map_err(|_| parse_err(source, line, format!("bad class index {class:?}")))?;
        assignment[i] = Some(c);
    }
    let assignment = assignment
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| parse_err(source, 0, format!("node {:?} has no class", g.id(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_assignment(assignment))
}

pub fn read_partition(path: &Path, g: &Graph) -> Result<Partition> {
    parse_partition(&read(path)?, &path.display().to_string(), g)
}

pub fn write_partition<W: Write>(g: &Graph, p: &Partition, mut out: W) -> std::io::Result<()> {
    for i in 0..g.node_count() {
        writeln!(out, "{} {}", g.id(i), p.class_of(i))?;
    }
    Ok(())
}

/// `node,label,score_0,...,score_{k-1}`, one row per node.
pub fn write_scores_csv<W: Write>(
    g: &Graph,
    scores: &DMatrix<f64>,
    labels: &[usize],
    class_names: &[String],
    out: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["node".to_string(), "label".to_string()];
    header.extend((0..scores.ncols()).map(|k| format!("score_{k}")));
    w.write_record(&header)?;
    for i in 0..g.node_count() {
        let mut row = vec![g.id(i).to_string(), class_names[labels[i]].clone()];
        row.extend(scores.row(i).iter().map(|s| s.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
