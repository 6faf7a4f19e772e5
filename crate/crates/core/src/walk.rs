//! Random-walk diagnostics for the transition matrix `P = D^-1 W`.
//!
//! Entry `(i, j)` of `(I - alpha P)^-1` is the expected number of visits to
//! `j` by a walk started at `i` that stops with probability `1 - alpha` before
//! every step. The start counts as one visit.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ssl::{build_label_matrix, solver::dense_system, LabelSet};

pub use crate::ssl::solver::DEFAULT_DENSE_CAP;

const DOMINANCE_GAP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct WalkDiagnostics {
    pub stationary: Vec<f64>,
    pub alpha: f64,
    pub visits: Option<DMatrix<f64>>,
}

impl WalkDiagnostics {
    /// Stationary distribution, plus the visit matrix when `n <= dense_cap`.
    pub fn compute(g: &Graph, alpha: f64, dense_cap: usize) -> Result<Self> {
        let stationary = stationary_distribution(g)?;
        let visits = if g.node_count() <= dense_cap {
            Some(expected_visits_with_cap(g, alpha, dense_cap)?)
        } else {
            None
        };
        Ok(Self {
            stationary,
            alpha,
            visits,
        })
    }
}

/// `pi_i = d_i / sum_j d_j`, the invariant law of the reversible walk.
pub fn stationary_distribution(g: &Graph) -> Result<Vec<f64>> {
    g.require_positive_degrees()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let total = g.total_weight();
    Ok(g.degrees().iter().map(|d| d / total).collect())
}

pub fn transition_matrix(g: &Graph) -> Result<DMatrix<f64>> {
    g.require_positive_degrees()?;
    let mut p = g.to_dense();
    for (i, &d) in g.degrees().iter().enumerate() {
        p.row_mut(i).scale_mut(1.0 / d);
    }
    Ok(p)
}

pub fn expected_visits(g: &Graph, alpha: f64) -> Result<DMatrix<f64>> {
    expected_visits_with_cap(g, alpha, DEFAULT_DENSE_CAP)
}

/// `(I - alpha D^-1 W)^-1` by dense LU.
pub fn expected_visits_with_cap(g: &Graph, alpha: f64, dense_cap: usize) -> Result<DMatrix<f64>> {
    check_alpha(alpha)?;
    g.require_positive_degrees()?;
    let n = g.node_count();
    if n > dense_cap {
        return Err(Error::TooLarge {
            n,
            cap: dense_cap,
            hint: "estimate visits with monte_carlo_visits instead",
        });
    }
    // sigma = 1 gives I - alpha D^-1 W
    dense_system(g, 1.0, alpha)
        .try_inverse()
        .ok_or(Error::Singular)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid_param(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Mean visit counts over `walks` simulated walks from `start`.
///
/// Walk `w` draws from a ChaCha8 stream keyed by `seed` with stream id `w`,
/// so the result does not depend on how walks are scheduled.
pub fn monte_carlo_visits(
    g: &Graph,
    start: usize,
    alpha: f64,
    walks: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let n = g.node_count();
    if start >= n {
        return Err(Error::invalid_input(format!("start node {start} out of range")));
    }
    if walks == 0 {
        return Err(Error::invalid_param("walks must be at least 1"));
    }
    g.require_positive_degrees()?;

    let cumulative: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            g.neighbors(i)
                .iter()
                .scan(0.0, |acc, &(_, w)| {
                    *acc += w;
                    Some(*acc)
                })
                .collect()
        })
        .collect();

    let counts = (0..walks as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut counts, walk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(walk);
                let mut node = start;
                counts[node] += 1;
                while rng.random::<f64>() < alpha {
                    let cum = &cumulative[node];
                    let target = rng.random::<f64>() * g.degree(node);
                    let pos = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
                    node = g.neighbors(node)[pos].0;
                    counts[node] += 1;
                }
                counts
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts.into_iter().map(|c| c as f64 / walks as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitWeights {
    /// `sum_i Y_ik d_i^sigma` per class.
    pub weights: Vec<f64>,
    /// The class that absorbs every node as `alpha -> 1`, if one strictly dominates.
    pub dominating: Option<usize>,
}

/// Predicts which class wins every node in the `alpha -> 1` limit.
pub fn limit_class_weights(g: &Graph, labels: &LabelSet, sigma: f64) -> Result<LimitWeights> {
    labels.require_all_classes()?;
    let y = build_label_matrix(labels, g.node_count())?;
    let weights: Vec<f64> = y
        .column_iter()
        .map(|col| {
            col.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, &v)| v * g.degree(i).powf(sigma))
                .sum()
        })
        .collect();

    let (best, &top) = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least two classes");
    let runner_up = weights
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != best)
        .map(|(_, &w)| w)
        .fold(f64::NEG_INFINITY, f64::max);
    let dominating = (top > 0.0 && (top - runner_up) / top > DOMINANCE_GAP).then_some(best);
    Ok(LimitWeights {
        weights,
        dominating,
    })
}
