//! Bundled datasets.

use crate::error::Result;
use crate::eval::Partition;
use crate::graph::Graph;
use crate::io::{parse_edge_list, parse_partition};

const LES_MISERABLES_EDGES: &str = include_str!("../fixtures/lesmis_edges.txt");
const LES_MISERABLES_PARTITION: &str = include_str!("../fixtures/lesmis_partition.txt");

/// Cluster names of the reference partition, indexed by class.
pub const LES_MISERABLES_CLUSTERS: [&str; 6] =
    ["Valjean", "Myriel", "Gavroche", "Cosette", "Thenardier", "Fantine"];

/// The Les Misérables co-appearance graph (unit weights) and its
/// six-cluster reference partition.
pub fn les_miserables() -> Result<(Graph, Partition)> {
    let g = parse_edge_list(LES_MISERABLES_EDGES, "lesmis_edges.txt", false)?;
    let p = parse_partition(LES_MISERABLES_PARTITION, "lesmis_partition.txt", &g)?;
    Ok((g, p))
}

pub fn les_miserables_edge_text() -> &'static str {
    LES_MISERABLES_EDGES
}

pub fn les_miserables_partition_text() -> &'static str {
    LES_MISERABLES_PARTITION
}
