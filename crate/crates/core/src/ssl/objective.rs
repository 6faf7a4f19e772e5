//! The generalized objective
//!
//! ```text
//! Q(F) = sum_ij w_ij |d_i^(s-1) F_i - d_j^(s-1) F_j|^2 + mu sum_i d_i^(2s-1) |F_i - Y_i|^2
//! ```
//!
//! and its gradient. The double sum runs over ordered pairs; here each
//! undirected edge is visited once and counted twice.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn check(g: &Graph, f: &DMatrix<f64>, y: &DMatrix<f64>, mu: f64) -> Result<()> {
    let n = g.node_count();
    if f.nrows() != n || y.shape() != f.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("F and Y both {n} x k"),
            actual: format!("F {:?}, Y {:?}", f.shape(), y.shape()),
        });
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::invalid_param(format!("mu must be positive, got {mu}")));
    }
    g.require_positive_degrees()
}

pub fn objective(g: &Graph, f: &DMatrix<f64>, y: &DMatrix<f64>, sigma: f64, mu: f64) -> Result<f64> {
    check(g, f, y, mu)?;
    let scale: Vec<f64> = g.degrees().iter().map(|d| d.powf(sigma - 1.0)).collect();
    let k = f.ncols();

    let mut smoothness = 0.0;
    for (i, j, w) in g.edges() {
        if i == j {
            continue;
        }
        let sq: f64 = (0..k)
            .map(|c| {
                let diff = scale[i] * f[(i, c)] - scale[j] * f[(j, c)];
                diff * diff
            })
            .sum();
        smoothness += 2.0 * w * sq;
    }

    let mut fitting = 0.0;
    for (i, &d) in g.degrees().iter().enumerate() {
        let sq: f64 = (0..k).map(|c| (f[(i, c)] - y[(i, c)]).powi(2)).sum();
        fitting += d.powf(2.0 * sigma - 1.0) * sq;
    }
    Ok(smoothness + mu * fitting)
}

/// `4 D^(s-1) (D - W) D^(s-1) F + 2 mu D^(2s-1) (F - Y)`, column by column.
pub fn objective_gradient(
    g: &Graph,
    f: &DMatrix<f64>,
    y: &DMatrix<f64>,
    sigma: f64,
    mu: f64,
) -> Result<DMatrix<f64>> {
    check(g, f, y, mu)?;
    let n = g.node_count();
    let scale: Vec<f64> = g.degrees().iter().map(|d| d.powf(sigma - 1.0)).collect();
    // h = D^(s-1) F
    let h = DMatrix::from_fn(n, f.ncols(), |i, c| scale[i] * f[(i, c)]);

    let mut grad = DMatrix::zeros(n, f.ncols());
    for i in 0..n {
        let d = g.degree(i);
        let fit = 2.0 * mu * d.powf(2.0 * sigma - 1.0);
        for c in 0..f.ncols() {
            let mut lap = d * h[(i, c)];
            for &(j, w) in g.neighbors(i) {
                lap -= w * h[(j, c)];
            }
            grad[(i, c)] = 4.0 * scale[i] * lap + fit * (f[(i, c)] - y[(i, c)]);
        }
    }
    Ok(grad)
}
