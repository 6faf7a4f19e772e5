//! Generalized graph-based semi-supervised classification.

pub mod classify;
pub mod labels;
pub mod objective;
pub mod solver;

pub use classify::{classify, HardLabels};
pub use labels::{build_label_matrix, LabelSet, Normalization};
pub use objective::{objective, objective_gradient};
pub use solver::{
    alpha_from_mu, mu_from_alpha, solve, ClassificationResult, MethodParams, SolveMode,
};
