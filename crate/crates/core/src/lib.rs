//! Graph-based semi-supervised classification with a single `sigma`-parameterized
//! operator covering the standard Laplacian (`sigma = 1`), normalized Laplacian
//! (`sigma = 0.5`) and PageRank-based (`sigma = 0`) methods.
//!
//! Alongside the solver the crate ships random-walk diagnostics, planted-partition
//! generation, modularity/precision scoring and sweep harnesses.

pub mod error;
pub mod eval;
pub mod experiment;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod ssl;
pub mod synth;
pub mod walk;

pub use error::{Error, Result};
pub use eval::{EvalReport, Partition};
pub use graph::{FeatureSet, Graph};
pub use ssl::{ClassificationResult, LabelSet, MethodParams, Normalization, SolveMode};
