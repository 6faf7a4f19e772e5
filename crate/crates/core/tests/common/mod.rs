#![allow(dead_code)]

use gssl_core::{Graph, LabelSet};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus extra edges with probability `p`, weights in [0.1, 2).
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = rng.random_range(0..i);
        edges.push((parent, i, rng.random_range(0.1..2.0)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, rng.random_range(0.1..2.0)));
            }
        }
    }
    Graph::from_indexed_edges(n, edges, false).unwrap()
}

/// `k` classes, one or two labeled nodes each, on distinct nodes.
pub fn random_labels(n: usize, k: usize, seed: u64) -> LabelSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let picks = rand::seq::index::sample(&mut rng, n, (2 * k).min(n));
    let mut labels = LabelSet::new(k).unwrap();
    for (pos, node) in picks.into_iter().enumerate() {
        if pos < k || rng.random::<bool>() {
            labels.insert(node, pos % k).unwrap();
        }
    }
    labels
}

pub fn degree_diag(g: &Graph, power: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        g.node_count(),
        g.degrees().iter().map(|d| d.powf(power)),
    ))
}
