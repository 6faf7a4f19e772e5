//! Seeded planted-partition graphs and labeled-point selection.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, which is specified independently of platform and word size.
//! Edge coins are drawn for every pair `(i, j)`, `i < j`, in lexicographic
//! order, one uniform `f64` each, and an edge is kept when the draw is below
//! the pair's probability.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::Partition;
use crate::graph::Graph;
use crate::ssl::LabelSet;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPartitionSpec {
    pub sizes: Vec<usize>,
    /// Intra-class link probability, one per class.
    pub p_in: Vec<f64>,
    pub p_out: f64,
    pub seed: u64,
}

impl PlantedPartitionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 2 {
            return Err(Error::invalid_param("need at least 2 classes"));
        }
        if self.sizes.contains(&0) {
            return Err(Error::invalid_param("class sizes must be positive"));
        }
        if self.p_in.len() != self.sizes.len() {
            return Err(Error::invalid_param(format!(
                "{} intra-class probabilities for {} classes",
                self.p_in.len(),
                self.sizes.len()
            )));
        }
        let valid = |p: f64| (0.0..=1.0).contains(&p);
        if !self.p_in.iter().all(|&p| valid(p)) || !valid(self.p_out) {
            return Err(Error::invalid_param("probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Samples a graph and returns it with its ground-truth partition.
///
/// Class `c` occupies a contiguous block of node indices, in class order.
pub fn planted_partition(spec: &PlantedPartitionSpec) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let class: Vec<usize> = spec
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let n = class.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if class[i] == class[j] {
                spec.p_in[class[i]]
            } else {
                spec.p_out
            };
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    let graph = Graph::from_indexed_edges(n, edges, false)?;
    let truth = Partition::new(class, spec.sizes.len())?;
    Ok((graph, truth))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    MinDegree,
    MaxDegree,
    UniformRandom,
}

/// One labeled node per class, chosen by that class's rule.
///
/// Degree ties go to the lowest node index.
pub fn extreme_degree_labels(
    g: &Graph,
    truth: &Partition,
    rules: &[SelectionRule],
    seed: u64,
) -> Result<LabelSet> {
    if truth.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} assignments", g.node_count()),
            actual: format!("{}", truth.len()),
        });
    }
    if rules.len() != truth.class_count() {
        return Err(Error::invalid_param(format!(
            "{} rules for {} classes",
            rules.len(),
            truth.class_count()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = LabelSet::new(truth.class_count())?;
    for (class, rule) in rules.iter().enumerate() {
        let members = truth.members(class);
        if members.is_empty() {
            return Err(Error::invalid_input(format!("class {class} is empty")));
        }
        let pick = match rule {
            SelectionRule::MinDegree => *members
                .iter()
                .min_by(|&&a, &&b| g.degree(a).total_cmp(&g.degree(b)).then(a.cmp(&b)))
                .unwrap(),
            SelectionRule::MaxDegree => *members
                .iter()
                .min_by(|&&a, &&b| g.degree(b).total_cmp(&g.degree(a)).then(a.cmp(&b)))
                .unwrap(),
            SelectionRule::UniformRandom => members[rng.random_range(0..members.len())],
        };
        labels.insert(pick, class)?;
    }
    Ok(labels)
}

/// `per_class` distinct nodes drawn uniformly from each class of `truth`.
pub fn sample_labels<R: Rng + ?Sized>(
    truth: &Partition,
    per_class: usize,
    rng: &mut R,
) -> Result<LabelSet> {
    if per_class == 0 {
        return Err(Error::invalid_param("labels per class must be at least 1"));
    }
    let mut labels = LabelSet::new(truth.class_count())?;
    for class in 0..truth.class_count() {
        let members = truth.members(class);
        if members.len() < per_class {
            return Err(Error::invalid_param(format!(
                "class {class} has {} nodes, cannot draw {per_class} labels",
                members.len()
            )));
        }
        for pos in index::sample(rng, members.len(), per_class) {
            labels.insert(members[pos], class)?;
        }
    }
    Ok(labels)
}
