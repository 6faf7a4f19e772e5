use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardLabels {
    pub labels: Vec<usize>,
    /// Rows with no positive evidence for any class.
    pub zero_rows: Vec<usize>,
}

/// Row-wise argmax; ties go to the lowest class index.
pub fn classify(scores: &DMatrix<f64>) -> Result<HardLabels> {
    let mut labels = Vec::with_capacity(scores.nrows());
    let mut zero_rows = Vec::new();
    for (i, row) in scores.row_iter().enumerate() {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (k, &s) in row.iter().enumerate() {
            if s.is_nan() {
                return Err(Error::invalid_input(format!("score ({i}, {k}) is NaN")));
            }
            if s > best_score {
                best = k;
                best_score = s;
            }
        }
        if row.iter().all(|&s| s == 0.0) {
            zero_rows.push(i);
        }
        labels.push(best);
    }
    Ok(HardLabels { labels, zero_rows })
}
