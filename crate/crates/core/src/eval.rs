//! Classification quality: weighted Newman modularity and
//! precision/recall against a reference partition.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ssl::LabelSet;

/// A total assignment of nodes to classes `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((i, &c)) = assignment.iter().enumerate().find(|(_, &c)| c >= k) {
            return Err(Error::invalid_input(format!(
                "node {i} assigned to class {c}, but only {k} classes exist"
            )));
        }
        Ok(Self { assignment, k })
    }

    /// Class count inferred as `max + 1`.
    pub fn from_assignment(assignment: Vec<usize>) -> Self {
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        Self { assignment, k }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.assignment[i] == class).collect()
    }

    pub fn empty_classes(&self) -> Vec<usize> {
        self.class_sizes()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(c, _)| c)
            .collect()
    }
}

/// Weighted modularity `(1/m2) sum_ij (w_ij - d_i d_j / m2) [c_i = c_j]`.
///
/// The sum is over ordered pairs and includes `i = j`, which is the usual
/// `sum_c (e_c - a_c^2)` form.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} assignments", g.node_count()),
            actual: format!("{}", p.len()),
        });
    }
    let m2 = g.total_weight();
    if m2 <= 0.0 {
        return Err(Error::invalid_input("modularity is undefined on a graph without edges"));
    }
    let mut internal = vec![0.0; p.class_count()];
    let mut degree_sum = vec![0.0; p.class_count()];
    for i in 0..g.node_count() {
        let c = p.class_of(i);
        degree_sum[c] += g.degree(i);
        for &(j, w) in g.neighbors(i) {
            if p.class_of(j) == c {
                internal[c] += w;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(e, a)| e / m2 - (a / m2).powi(2))
        .sum())
}

/// Nodes not present in `labels`.
pub fn unlabeled_nodes(n: usize, labels: &LabelSet) -> Vec<usize> {
    (0..n).filter(|&i| !labels.is_labeled(i)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub modularity: Option<f64>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    /// Fraction of evaluated nodes predicted correctly (the default headline number).
    pub micro_precision: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    /// `confusion[truth][pred]`.
    pub confusion: Vec<Vec<u64>>,
    /// Classes never predicted; their precision is reported as 0.
    pub empty_predicted: Vec<usize>,
    /// Classes absent from the evaluated truth; their recall is reported as 0.
    pub empty_truth: Vec<usize>,
}

impl EvalReport {
    pub fn evaluated(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    /// One row per class plus a `summary` row carrying micro precision,
    /// macro recall and modularity.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "row", "precision", "recall", "correct", "predicted", "actual", "modularity", "note",
        ])?;
        let k = self.precision.len();
        for c in 0..k {
            let predicted: u64 = self.confusion.iter().map(|row| row[c]).sum();
            let actual: u64 = self.confusion[c].iter().sum();
            let mut notes = Vec::new();
            if self.empty_predicted.contains(&c) {
                notes.push("empty_prediction");
            }
            if self.empty_truth.contains(&c) {
                notes.push("empty_truth");
            }
            w.write_record([
                format!("class_{c}"),
                self.precision[c].to_string(),
                self.recall[c].to_string(),
                self.confusion[c][c].to_string(),
                predicted.to_string(),
                actual.to_string(),
                String::new(),
                notes.join(";"),
            ])?;
        }
        let correct: u64 = (0..k).map(|c| self.confusion[c][c]).sum();
        w.write_record([
            "summary".to_string(),
            self.micro_precision.to_string(),
            self.macro_recall.to_string(),
            correct.to_string(),
            self.evaluated().to_string(),
            self.evaluated().to_string(),
            self.modularity.map(|q| q.to_string()).unwrap_or_default(),
            format!("precision=micro;macro_precision={}", self.macro_precision),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Compares `pred` to `truth` on the `evaluated` nodes. Class ids must
/// already agree; no relabeling is attempted.
pub fn score_against(pred: &Partition, truth: &Partition, evaluated: &[usize]) -> Result<EvalReport> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} predictions", truth.len()),
            actual: format!("{}", pred.len()),
        });
    }
    if pred.class_count() != truth.class_count() {
        return Err(Error::invalid_input(format!(
            "class count mismatch: predicted {}, truth {}",
            pred.class_count(),
            truth.class_count()
        )));
    }
    let k = truth.class_count();
    let mut confusion = vec![vec![0u64; k]; k];
    for &i in evaluated {
        if i >= truth.len() {
            return Err(Error::invalid_input(format!("evaluated node {i} out of range")));
        }
        confusion[truth.class_of(i)][pred.class_of(i)] += 1;
    }

    let mut precision = vec![0.0; k];
    let mut recall = vec![0.0; k];
    let mut empty_predicted = Vec::new();
    let mut empty_truth = Vec::new();
    for c in 0..k {
        let correct = confusion[c][c] as f64;
        let predicted: u64 = confusion.iter().map(|row| row[c]).sum();
        let actual: u64 = confusion[c].iter().sum();
        if predicted == 0 {
            empty_predicted.push(c);
        } else {
            precision[c] = correct / predicted as f64;
        }
        if actual == 0 {
            empty_truth.push(c);
        } else {
            recall[c] = correct / actual as f64;
        }
    }
    let total: u64 = confusion.iter().flatten().sum();
    let correct: u64 = (0..k).map(|c| confusion[c][c]).sum();
    let micro_precision = if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    };
    let mean = |v: &[f64]| if k == 0 { 0.0 } else { v.iter().sum::<f64>() / k as f64 };
    Ok(EvalReport {
        modularity: None,
        macro_precision: mean(&precision),
        macro_recall: mean(&recall),
        precision,
        recall,
        micro_precision,
        confusion,
        empty_predicted,
        empty_truth,
    })
}

/// [`score_against`] plus the modularity of `pred` on `g`.
pub fn evaluate(
    g: &Graph,
    pred: &Partition,
    truth: &Partition,
    evaluated: &[usize],
) -> Result<EvalReport> {
    let mut report = score_against(pred, truth, evaluated)?;
    report.modularity = Some(modularity(g, pred)?);
    Ok(report)
}
