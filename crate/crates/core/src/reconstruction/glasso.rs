//! Graphical lasso by block coordinate descent.
//!
//! Maximises `log det Θ - tr(SΘ) - alpha * Σ_{i≠j} |Θ_ij|`. The working
//! covariance `W` keeps the empirical diagonal (the diagonal is not
//! penalised) and each column is updated by solving a lasso problem with
//! cyclic coordinate descent, warm-started from the previous sweep.

use nalgebra::{DMatrix, DVector};

use super::correlation::{covariance, precision_to_partial};
use super::{check_series, ReconstructionResult};
use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};

const INNER_MAX_PASSES: usize = 10_000;
const INNER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphicalLassoOptions {
    pub alpha: f64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for GraphicalLassoOptions {
    fn default() -> Self {
        GraphicalLassoOptions {
            alpha: 0.01,
            tol: 1e-4,
            max_sweeps: 100,
        }
    }
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Coordinate descent for `min_b 1/2 bᵀ W b - sᵀ b + alpha |b|_1`, in place.
fn lasso_cd(w: &DMatrix<f64>, s: &DVector<f64>, alpha: f64, beta: &mut DVector<f64>) {
    let m = s.len();
    for _ in 0..INNER_MAX_PASSES {
        let mut max_delta = 0.0_f64;
        let mut max_beta = 0.0_f64;
        for k in 0..m {
            let wkk = w[(k, k)];
            let old = beta[k];
            let new = if wkk <= 0.0 {
                0.0
            } else {
                let partial: f64 = (0..m).filter(|&l| l != k).map(|l| w[(k, l)] * beta[l]).sum();
                soft_threshold(s[k] - partial, alpha) / wkk
            };
            beta[k] = new;
            max_delta = max_delta.max((new - old).abs());
            max_beta = max_beta.max(new.abs());
        }
        if max_delta <= INNER_TOL * (max_beta + 1e-12) {
            break;
        }
    }
}

fn without(n: usize, j: usize) -> Vec<usize> {
    (0..n).filter(|&k| k != j).collect()
}

/// Sparse partial-correlation network from the graphical lasso.
///
/// Reports `converged = 0` in the result params when `max_sweeps` runs out.
pub fn reconstruct_graphical_lasso(
    ts: &TimeSeriesMatrix,
    opts: &GraphicalLassoOptions,
) -> Result<ReconstructionResult> {
    check_series(ts)?;
    if !(opts.alpha >= 0.0) || !opts.alpha.is_finite() {
        return Err(Error::param(format!("alpha must be non-negative, got {}", opts.alpha)));
    }
    if !(opts.tol > 0.0) || opts.max_sweeps == 0 {
        return Err(Error::param("tol must be positive and max_sweeps at least 1"));
    }
    let s = covariance(ts);
    let n = s.nrows();

    let off_count = (n * (n - 1)) as f64;
    let mean_abs_s = if n > 1 {
        (s.abs().sum() - s.diagonal().abs().sum()) / off_count
    } else {
        0.0
    };
    let threshold = opts.tol * (mean_abs_s + 1e-12);

    let mut w = s.clone();
    let mut betas: Vec<DVector<f64>> = vec![DVector::zeros(n.saturating_sub(1)); n];
    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < opts.max_sweeps {
        sweeps += 1;
        let w_old = w.clone();
        for j in 0..n {
            let idx = without(n, j);
            let w11 = w.select_rows(&idx).select_columns(&idx);
            let s12 = DVector::from_iterator(n - 1, idx.iter().map(|&k| s[(k, j)]));
            lasso_cd(&w11, &s12, opts.alpha, &mut betas[j]);
            let w12 = &w11 * &betas[j];
            for (pos, &k) in idx.iter().enumerate() {
                w[(k, j)] = w12[pos];
                w[(j, k)] = w12[pos];
            }
        }
        let change = ((&w - &w_old).abs().sum()) / off_count;
        converged = change < threshold;
    }

    let mut theta = DMatrix::zeros(n, n);
    for j in 0..n {
        let idx = without(n, j);
        let w12 = DVector::from_iterator(n - 1, idx.iter().map(|&k| w[(k, j)]));
        let schur = w[(j, j)] - w12.dot(&betas[j]);
        let tjj = if schur > 0.0 { 1.0 / schur } else { 0.0 };
        theta[(j, j)] = tjj;
        for (pos, &k) in idx.iter().enumerate() {
            theta[(k, j)] = -betas[j][pos] * tjj;
        }
    }
    let theta = (&theta + theta.transpose()) * 0.5;

    Ok(ReconstructionResult::new("graphical_lasso", precision_to_partial(&theta), false)
        .param("alpha", opts.alpha)
        .param("tol", opts.tol)
        .param("max_sweeps", opts.max_sweeps as f64)
        .param("sweeps", sweeps as f64)
        .param("converged", if converged { 1.0 } else { 0.0 }))
}
