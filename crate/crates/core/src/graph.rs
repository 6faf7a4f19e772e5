//! Undirected weighted similarity graphs.
//!
//! A [`Graph`] stores symmetric neighbor lists with strictly positive weights,
//! the weighted degree `d_i = sum_j w_ij` of every node, and the total weight
//! `sum_i d_i`. Graphs are immutable once built.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Display;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Graph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    total_weight: f64,
}

impl Graph {
    /// Builds a graph from `(u, v, weight)` triples with arbitrary node ids.
    ///
    /// Ids are renumbered densely in first-appearance order. A missing weight
    /// means 1.0; repeated pairs (in either orientation) have their weights summed.
    pub fn from_edge_list<S, I>(entries: I, allow_self_loops: bool) -> Result<Self>
    where
        S: Display,
        I: IntoIterator<Item = (S, S, Option<f64>)>,
    {
        let mut ids: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |s: String| -> usize {
            if let Some(&i) = index.get(&s) {
                return i;
            }
            let i = ids.len();
            index.insert(s.clone(), i);
            ids.push(s);
            i
        };
        let mut edges = Vec::new();
        for (u, v, w) in entries {
            let u = intern(u.to_string());
            let v = intern(v.to_string());
            edges.push((u, v, w.unwrap_or(1.0)));
        }
        let n = ids.len();
        Self::build(ids, n, edges, allow_self_loops)
    }

    /// Builds a graph over nodes `0..n` (ids are the decimal indices).
    pub fn from_indexed_edges<I>(n: usize, edges: I, allow_self_loops: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let ids = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = edges.into_iter().collect();
        Self::build(ids, n, edges, allow_self_loops)
    }

    fn build(
        ids: Vec<String>,
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        allow_self_loops: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid_input("graph must have at least one node"));
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid_input(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid_input(format!(
                    "edge ({}, {}) has non-positive weight {w}",
                    ids[u], ids[v]
                )));
            }
            if u == v && !allow_self_loops {
                return Err(Error::invalid_input(format!(
                    "self-loop on node {} is not allowed",
                    ids[u]
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }

        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), &w) in &merged {
            adjacency[u].push((v, w));
            if u != v {
                adjacency[v].push((u, w));
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        let degrees: Vec<f64> = adjacency
            .iter()
            .map(|list| list.iter().map(|&(_, w)| w).sum())
            .collect();
        let total_weight = degrees.iter().sum();
        let index = ids.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();

        Ok(Self {
            ids,
            index,
            adjacency,
            degrees,
            total_weight,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Neighbors of `i` as `(j, w_ij)`, sorted by `j`.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// `sum_i d_i`, twice the undirected edge weight when there are no self-loops.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let list = &self.adjacency[i];
        match list.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => list[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Number of undirected edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Number of ordered pairs `(i, j)` with `w_ij > 0`.
    pub fn ordered_pair_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Each undirected edge once, as `(i, j, w)` with `i <= j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&(j, _)| j >= i)
                .map(move |&(j, w)| (i, j, w))
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    /// Fails with [`Error::IsolatedNode`] on the first zero-degree node.
    pub fn require_positive_degrees(&self) -> Result<()> {
        match self.degrees.iter().position(|&d| d <= 0.0) {
            Some(i) => Err(Error::IsolatedNode(i)),
            None => Ok(()),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.node_count();
        let mut w = DMatrix::zeros(n, n);
        for (i, list) in self.adjacency.iter().enumerate() {
            for &(j, wij) in list {
                w[(i, j)] = wij;
            }
        }
        w
    }
}

/// Instances described by a fixed number of real attributes.
#[derive(Debug, Clone)]
pub struct FeatureSet {
    dim: usize,
    values: Vec<Vec<f64>>,
}

impl FeatureSet {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let dim = values
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid_input("feature set is empty"))?;
        if dim == 0 {
            return Err(Error::invalid_input("features must have at least one attribute"));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim} attributes"),
                    actual: format!("{} attributes in row {i}", row.len()),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid_input(format!("row {i} has a non-finite value")));
            }
        }
        Ok(Self { dim, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.values[i]
            .iter()
            .zip(&self.values[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Complete graph with `w_ij = exp(-|x_i - x_j|^2 / gamma)`.
///
/// Pairs whose weight underflows to zero are left out.
pub fn rbf_similarity(features: &FeatureSet, gamma: f64) -> Result<Graph> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::invalid_param(format!("gamma must be positive, got {gamma}")));
    }
    let n = features.len();
    if n < 2 {
        return Err(Error::invalid_input("rbf similarity needs at least two instances"));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let w = (-features.squared_distance(i, j) / gamma).exp();
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    Graph::from_indexed_edges(n, edges, false)
}

/// Symmetrized k-nearest-neighbor graph, `W' = (A + A^T) / 2`.
///
/// `A_ij = 1` when `j` is among the `k` nearest neighbors of `i` (Euclidean,
/// ties to the lower index), so weights are 1.0 for mutual neighbors and 0.5 otherwise.
pub fn knn_similarity(features: &FeatureSet, k: usize) -> Result<Graph> {
    let n = features.len();
    if k == 0 || k >= n {
        return Err(Error::invalid_param(format!(
            "k must satisfy 1 <= k < n (k = {k}, n = {n})"
        )));
    }
    let mut directed: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        candidates.clear();
        candidates.extend(
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (features.squared_distance(i, j), j)),
        );
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in &candidates[..k] {
            *directed.entry((i.min(j), i.max(j))).or_insert(0.0) += 0.5;
        }
    }
    Graph::from_indexed_edges(n, directed.into_iter().map(|((i, j), w)| (i, j, w)), false)
}

/// Breadth-first check that every node is reachable from node 0.
pub fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for &(j, _) in g.neighbors(i) {
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    reached == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edge_list([(0, 1, None), (1, 2, None)], false).unwrap()
    }

    #[test]
    fn path_graph_degrees() {
        let g = path3();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degrees(), &[1.0, 2.0, 1.0]);
        assert_eq!(g.total_weight(), 4.0);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.ordered_pair_count(), 4);
    }

    #[test]
    fn duplicate_pairs_are_summed() {
        let g = Graph::from_edge_list([(0, 1, Some(2.0)), (1, 0, Some(1.0))], false).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 3.0);
        assert_eq!(g.weight(1, 0), 3.0);
        assert_eq!(g.degrees(), &[3.0, 3.0]);
    }

    #[test]
    fn renumbering_follows_first_appearance() {
        let g = Graph::from_edge_list([("b", "a", None), ("c", "b", None)], false).unwrap();
        assert_eq!(g.ids(), &["b", "a", "c"]);
        assert_eq!(g.index_of("c"), Some(2));
        assert_eq!(g.index_of("zzz"), None);
    }

    #[test]
    fn rejects_bad_weights_and_loops() {
        assert!(Graph::from_edge_list([(0, 1, Some(0.0))], false).is_err());
        assert!(Graph::from_edge_list([(0, 1, Some(-1.0))], false).is_err());
        assert!(Graph::from_edge_list([(0, 1, Some(f64::NAN))], false).is_err());
        assert!(Graph::from_edge_list([(0, 0, None)], false).is_err());
    }

    #[test]
    fn self_loop_counts_once() {
        let g = Graph::from_edge_list([(0, 0, Some(2.0)), (0, 1, None)], true).unwrap();
        assert_eq!(g.degrees(), &[3.0, 1.0]);
        assert_eq!(g.neighbors(0), &[(0, 2.0), (1, 1.0)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn isolated_nodes_allowed_but_detected() {
        let g = Graph::from_indexed_edges(3, [(0, 1, 1.0)], false).unwrap();
        assert_eq!(g.degree(2), 0.0);
        assert!(matches!(g.require_positive_degrees(), Err(Error::IsolatedNode(2))));
        assert!(!g.is_connected());
    }

    #[test]
    fn rbf_examples() {
        let same = FeatureSet::new(vec![vec![1.5], vec![1.5]]).unwrap();
        assert_eq!(rbf_similarity(&same, 0.7).unwrap().weight(0, 1), 1.0);

        let gamma: f64 = 2.5;
        let pair = FeatureSet::new(vec![vec![0.0], vec![gamma.sqrt()]]).unwrap();
        let w = rbf_similarity(&pair, gamma).unwrap().weight(0, 1);
        assert!((w - (-1.0f64).exp()).abs() < 1e-15);

        let line = FeatureSet::new(vec![vec![0.0], vec![0.4], vec![0.8]]).unwrap();
        let g = rbf_similarity(&line, 1.0).unwrap();
        assert!((g.weight(0, 2) - g.weight(0, 1).powi(4)).abs() < 1e-14);

        assert!(rbf_similarity(&line, 0.0).is_err());
        assert!(rbf_similarity(&line, -1.0).is_err());
    }

    #[test]
    fn knn_examples() {
        let pair = FeatureSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let g = knn_similarity(&pair, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 1.0);

        let pts = FeatureSet::new(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let g = knn_similarity(&pts, 1).unwrap();
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(1, 2), 0.5);
        assert_eq!(g.weight(0, 2), 0.0);

        let g = knn_similarity(&pts, 2).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().all(|(_, _, w)| w == 1.0));

        assert!(knn_similarity(&pts, 3).is_err());
        assert!(knn_similarity(&pts, 0).is_err());
    }

    #[test]
    fn feature_rows_must_agree() {
        assert!(FeatureSet::new(vec![vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(FeatureSet::new(vec![vec![]]).is_err());
        assert!(FeatureSet::new(vec![]).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        let two = Graph::from_edge_list([(0, 1, None), (2, 3, None)], false).unwrap();
        assert!(!is_connected(&two));
    }
}
