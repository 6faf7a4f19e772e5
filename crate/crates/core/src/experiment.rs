//! Parameter sweeps over `(sigma, alpha)` with modularity and precision scoring.
//!
//! Trial `t` draws its labeled nodes from a ChaCha8 stream keyed by the sweep
//! seed with stream id `t`. Trials run in parallel but rows are always
//! emitted ordered by sigma, then alpha, then trial.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{modularity, score_against, unlabeled_nodes, Partition};
use crate::graph::Graph;
use crate::ssl::{build_label_matrix, solve, LabelSet, MethodParams, SolveMode};
use crate::synth::sample_labels;

/// Largest regularization accepted by sweeps.
pub const MAX_ALPHA: f64 = 0.999;

pub const DEFAULT_ALPHAS: [f64; 12] =
    [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999];

pub const DEFAULT_SIGMAS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalSet {
    /// Score only nodes that were not labeled.
    #[default]
    Unlabeled,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub labels_per_class: usize,
    pub seed: u64,
    pub evaluation: EvalSet,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            alphas: DEFAULT_ALPHAS.to_vec(),
            sigmas: DEFAULT_SIGMAS.to_vec(),
            trials: 100,
            labels_per_class: 1,
            seed: 0,
            evaluation: EvalSet::Unlabeled,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.sigmas.is_empty() {
            return Err(Error::invalid_param("alpha and sigma grids must be nonempty"));
        }
        if let Some(a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a <= MAX_ALPHA)) {
            return Err(Error::invalid_param(format!(
                "alpha {a} outside (0, {MAX_ALPHA}]"
            )));
        }
        if self.sigmas.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid_param("sigma values must be finite"));
        }
        if self.trials == 0 || self.labels_per_class == 0 {
            return Err(Error::invalid_param("trials and labels per class must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sigma: f64,
    pub alpha: f64,
    pub trial: usize,
    pub modularity: f64,
    pub precision: Option<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub sigma: f64,
    pub alpha: f64,
    pub trials: usize,
    pub modularity_mean: f64,
    pub modularity_std: f64,
    pub precision_mean: Option<f64>,
    pub precision_std: Option<f64>,
    pub iterations_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<AggregateRow>,
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl SweepResult {
    /// Builds aggregates from rows already ordered by sigma, alpha, trial.
    pub fn from_rows(rows: Vec<SweepRow>) -> Self {
        let mut aggregates = Vec::new();
        let mut start = 0;
        while start < rows.len() {
            let (s, a) = (rows[start].sigma, rows[start].alpha);
            let end = start
                + rows[start..]
                    .iter()
                    .take_while(|r| r.sigma == s && r.alpha == a)
                    .count();
            let cell = &rows[start..end];
            let (modularity_mean, modularity_std) =
                mean_std(&cell.iter().map(|r| r.modularity).collect::<Vec<_>>());
            let precision: Option<Vec<f64>> = cell.iter().map(|r| r.precision).collect();
            let (precision_mean, precision_std) = match precision {
                Some(p) => {
                    let (m, sd) = mean_std(&p);
                    (Some(m), Some(sd))
                }
                None => (None, None),
            };
            let iterations_mean =
                cell.iter().map(|r| r.iterations as f64).sum::<f64>() / cell.len() as f64;
            aggregates.push(AggregateRow {
                sigma: s,
                alpha: a,
                trials: cell.len(),
                modularity_mean,
                modularity_std,
                precision_mean,
                precision_std,
                iterations_mean,
            });
            start = end;
        }
        Self { rows, aggregates }
    }

    pub fn aggregate(&self, sigma: f64, alpha: f64) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.sigma == sigma && a.alpha == alpha)
    }
}

/// Outcome of one `(sigma, alpha)` cell for one label set.
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub labels: Vec<usize>,
    pub modularity: f64,
    pub precision: Option<f64>,
    pub iterations: usize,
}

/// Solves, classifies and scores a single cell.
pub fn run_cell(
    g: &Graph,
    labels: &LabelSet,
    truth: Option<&Partition>,
    sigma: f64,
    alpha: f64,
    evaluation: EvalSet,
) -> Result<CellOutcome> {
    let y = build_label_matrix(labels, g.node_count())?;
    let params = MethodParams::new(sigma, alpha)?;
    let result = solve(g, &y, &params, SolveMode::Iterative)?;
    let pred = Partition::new(result.labels, labels.class_count())?;
    let q = modularity(g, &pred)?;
    let precision = match truth {
        Some(truth) => {
            let evaluated = match evaluation {
                EvalSet::Unlabeled => unlabeled_nodes(g.node_count(), labels),
                EvalSet::All => (0..g.node_count()).collect(),
            };
            Some(score_against(&pred, truth, &evaluated)?.micro_precision)
        }
        None => None,
    };
    Ok(CellOutcome {
        labels: pred.assignment().to_vec(),
        modularity: q,
        precision,
        iterations: result.iterations,
    })
}

/// Labeled set drawn for trial `trial` of a sweep seeded with `seed`.
pub fn trial_labels(truth: &Partition, per_class: usize, seed: u64, trial: usize) -> Result<LabelSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    sample_labels(truth, per_class, &mut rng)
}

fn grid_rows(
    g: &Graph,
    labels: &LabelSet,
    truth: Option<&Partition>,
    spec: &SweepSpec,
    trial: usize,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(spec.sigmas.len() * spec.alphas.len());
    for &sigma in &spec.sigmas {
        for &alpha in &spec.alphas {
            let cell = run_cell(g, labels, truth, sigma, alpha, spec.evaluation)?;
            rows.push(SweepRow {
                sigma,
                alpha,
                trial,
                modularity: cell.modularity,
                precision: cell.precision,
                iterations: cell.iterations,
            });
        }
    }
    Ok(rows)
}

/// Repeated trials with freshly sampled labeled nodes; every trial reuses its
/// labeled set across the whole `(sigma, alpha)` grid.
pub fn random_label_trials(g: &Graph, truth: &Partition, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if truth.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} assignments", g.node_count()),
            actual: format!("{}", truth.len()),
        });
    }
    let smallest = truth.class_sizes().into_iter().min().unwrap_or(0);
    if spec.labels_per_class > smallest {
        return Err(Error::invalid_param(format!(
            "{} labels per class requested but the smallest class has {smallest} nodes",
            spec.labels_per_class
        )));
    }
    g.require_positive_degrees()?;

    let per_trial: Vec<Vec<SweepRow>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let labels = trial_labels(truth, spec.labels_per_class, spec.seed, trial)?;
            grid_rows(g, &labels, Some(truth), spec, trial)
        })
        .collect::<Result<_>>()?;

    // per_trial[t][cell] -> rows ordered by cell, then trial
    let cells = spec.sigmas.len() * spec.alphas.len();
    let mut rows = Vec::with_capacity(cells * spec.trials);
    for cell in 0..cells {
        for trial_rows in &per_trial {
            rows.push(trial_rows[cell].clone());
        }
    }
    Ok(SweepResult::from_rows(rows))
}

/// Full `(sigma, alpha)` grid for one fixed labeled set. Rows use trial 0.
pub fn alpha_sweep(
    g: &Graph,
    labels: &LabelSet,
    truth: Option<&Partition>,
    spec: &SweepSpec,
) -> Result<SweepResult> {
    spec.validate()?;
    labels.validate_for(g.node_count())?;
    if let Some(truth) = truth {
        if truth.class_count() != labels.class_count() {
            return Err(Error::invalid_input(format!(
                "labels name {} classes, truth has {}",
                labels.class_count(),
                truth.class_count()
            )));
        }
    }
    let rows = grid_rows(g, labels, truth, spec, 0)?;
    Ok(SweepResult::from_rows(rows))
}

const ROW_HEADER: [&str; 6] = ["sigma", "alpha", "trial", "modularity", "precision", "iterations"];
const AGG_HEADER: [&str; 8] = [
    "sigma",
    "alpha",
    "trials",
    "modularity_mean",
    "modularity_std",
    "precision_mean",
    "precision_std",
    "iterations_mean",
];

/// `out.csv` -> `out_agg.csv`.
pub fn aggregate_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    path.with_file_name(format!("{stem}_agg.{ext}"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

/// Writes rows to `path` and aggregates to its `_agg` sibling.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let csv_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| Error::Csv { path: p, source }
    };

    let mut w = csv_writer(path)?;
    w.write_record(ROW_HEADER).map_err(csv_err(path))?;
    for r in &result.rows {
        w.write_record([
            r.sigma.to_string(),
            r.alpha.to_string(),
            r.trial.to_string(),
            r.modularity.to_string(),
            opt(r.precision),
            r.iterations.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;

    let agg_path = aggregate_path(path);
    let mut w = csv_writer(&agg_path)?;
    w.write_record(AGG_HEADER).map_err(csv_err(&agg_path))?;
    for a in &result.aggregates {
        w.write_record([
            a.sigma.to_string(),
            a.alpha.to_string(),
            a.trials.to_string(),
            a.modularity_mean.to_string(),
            a.modularity_std.to_string(),
            opt(a.precision_mean),
            opt(a.precision_std),
            a.iterations_mean.to_string(),
        ])
        .map_err(csv_err(&agg_path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: agg_path.clone(),
        source,
    })?;
    Ok(())
}

/// Reads the row file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |line: usize, msg: String| Error::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.len() != ROW_HEADER.len() {
            return Err(bad(line, format!("expected {} fields", ROW_HEADER.len())));
        }
        let float = |k: usize| {
            record[k]
                .parse::<f64>()
                .map_err(|e| bad(line, format!("{}: {e}", ROW_HEADER[k])))
        };
        let int = |k: usize| {
            record[k]
                .parse::<usize>()
                .map_err(|e| bad(line, format!("{}: {e}", ROW_HEADER[k])))
        };
        rows.push(SweepRow {
            sigma: float(0)?,
            alpha: float(1)?,
            trial: int(2)?,
            modularity: float(3)?,
            precision: if record[4].is_empty() { None } else { Some(float(4)?) },
            iterations: int(5)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        let mut spec = SweepSpec::default();
        assert!(spec.validate().is_ok());
        spec.alphas = vec![1.0];
        assert!(spec.validate().is_err());
        spec.alphas = vec![0.9995];
        assert!(spec.validate().is_err());
        spec.alphas = vec![];
        assert!(spec.validate().is_err());
        let spec = SweepSpec {
            trials: 0,
            ..SweepSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn aggregate_path_naming() {
        assert_eq!(aggregate_path(Path::new("/tmp/x/out.csv")), Path::new("/tmp/x/out_agg.csv"));
        assert_eq!(aggregate_path(Path::new("res")), Path::new("res_agg.csv"));
    }

    #[test]
    fn aggregates_use_sample_std() {
        let row = |trial, modularity| SweepRow {
            sigma: 0.0,
            alpha: 0.5,
            trial,
            modularity,
            precision: None,
            iterations: 10,
        };
        let r = SweepResult::from_rows(vec![row(0, 1.0), row(1, 3.0)]);
        assert_eq!(r.aggregates.len(), 1);
        let a = &r.aggregates[0];
        assert_eq!(a.modularity_mean, 2.0);
        assert!((a.modularity_std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.precision_mean, None);
        assert_eq!(a.iterations_mean, 10.0);
    }
}
