use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// How labeled entries of the labeling matrix are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `Y_ik = 1` for every node labeled `k`.
    #[default]
    Raw,
    /// Each column divided by its labeled count, so columns sum to one.
    PerClass,
}

/// Partial assignment of node indices to classes `0..k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSet {
    k: usize,
    assignments: BTreeMap<usize, usize>,
    normalization: Normalization,
}

impl LabelSet {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid_param(format!("need at least 2 classes, got {k}")));
        }
        Ok(Self {
            k,
            assignments: BTreeMap::new(),
            normalization: Normalization::Raw,
        })
    }

    pub fn from_pairs(k: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = Self::new(k)?;
        for (node, class) in pairs {
            set.insert(node, class)?;
        }
        Ok(set)
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// Labels `node` as `class`, replacing any previous label.
    pub fn insert(&mut self, node: usize, class: usize) -> Result<()> {
        if class >= self.k {
            return Err(Error::invalid_input(format!(
                "class {class} out of range for {} classes",
                self.k
            )));
        }
        self.assignments.insert(node, class);
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn class_of(&self, node: usize) -> Option<usize> {
        self.assignments.get(&node).copied()
    }

    pub fn is_labeled(&self, node: usize) -> bool {
        self.assignments.contains_key(&node)
    }

    /// `(node, class)` pairs in increasing node order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignments.iter().map(|(&n, &c)| (n, c))
    }

    pub fn counts_per_class(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for &c in self.assignments.values() {
            counts[c] += 1;
        }
        counts
    }

    /// Checks that every labeled index is below `n`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        match self.assignments.keys().find(|&&i| i >= n) {
            Some(&i) => Err(Error::invalid_input(format!(
                "labeled node {i} out of range for {n} nodes"
            ))),
            None => Ok(()),
        }
    }

    /// Fails unless every class has at least one labeled node.
    pub fn require_all_classes(&self) -> Result<()> {
        match self.counts_per_class().iter().position(|&c| c == 0) {
            Some(k) => Err(Error::invalid_input(format!("class {k} has no labeled node"))),
            None => Ok(()),
        }
    }
}

/// The `n x k` labeling matrix for `labels`.
pub fn build_label_matrix(labels: &LabelSet, n: usize) -> Result<DMatrix<f64>> {
    labels.validate_for(n)?;
    let counts = labels.counts_per_class();
    if labels.normalization == Normalization::PerClass {
        labels.require_all_classes()?;
    }
    let mut y = DMatrix::zeros(n, labels.k);
    for (node, class) in labels.iter() {
        y[(node, class)] = match labels.normalization {
            Normalization::Raw => 1.0,
            Normalization::PerClass => 1.0 / counts[class] as f64,
        };
    }
    Ok(y)
}
