use nalgebra::{DMatrix, DVector};

use super::{check_series, pairwise, ReconstructionResult};
use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};

const RANK_TOL: f64 = 1e-10;
/// Caps the log-ratio when the full model fits (numerically) perfectly.
const MIN_RSS_RATIO: f64 = 1e-15;

/// Residual sum of squares of the least-squares fit, or `None` if the
/// design is rank deficient. Columns are normalised first so the rank test
/// does not depend on the scale of the data.
fn residual_ss(mut design: DMatrix<f64>, y: &DVector<f64>) -> Option<f64> {
    for mut col in design.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            return None;
        }
        col /= norm;
    }
    let qr = design.clone().qr();
    let r = qr.r();
    let max_diag = r.diagonal().amax();
    if r.diagonal().iter().any(|d| d.abs() <= RANK_TOL * max_diag) {
        return None;
    }
    let qty = qr.q().transpose() * y;
    let beta = r.solve_upper_triangular(&qty)?;
    Some((y - design * beta).norm_squared())
}

fn lagged_design(rows: &[&[f64]], order: usize, len: usize) -> DMatrix<f64> {
    let m = len - order;
    let cols = 1 + rows.len() * order;
    DMatrix::from_fn(m, cols, |r, c| {
        if c == 0 {
            1.0
        } else {
            let which = (c - 1) / order;
            let lag = (c - 1) % order + 1;
            rows[which][r + order - lag]
        }
    })
}

/// Pairwise linear Granger causality.
///
/// `weights[(i, j)] = max(0, ln(RSS_restricted / RSS_full))` where the
/// restricted model regresses row `j` on its own `order` lags and the full
/// model adds `order` lags of row `i`. Both include an intercept.
pub fn reconstruct_granger(ts: &TimeSeriesMatrix, order: usize) -> Result<ReconstructionResult> {
    check_series(ts)?;
    if order == 0 {
        return Err(Error::param("granger order must be at least 1"));
    }
    let len = ts.n_steps();
    if len <= 3 * order + 3 {
        return Err(Error::InsufficientData(format!(
            "granger order {order} needs more than {} timesteps, got {len}",
            3 * order + 3
        )));
    }
    let rows: Vec<Vec<f64>> = (0..ts.n_nodes()).map(|i| ts.row(i)).collect();
    let targets: Vec<DVector<f64>> = rows
        .iter()
        .map(|r| DVector::from_column_slice(&r[order..]))
        .collect();
    let restricted: Vec<Option<f64>> = rows
        .iter()
        .zip(&targets)
        .map(|(r, y)| residual_ss(lagged_design(&[r], order, len), y))
        .collect();

    let w = pairwise(ts.n_nodes(), false, |i, j| {
        let Some(rss_r) = restricted[j] else {
            return 0.0;
        };
        if rss_r <= 0.0 {
            return 0.0;
        }
        let Some(rss_f) = residual_ss(lagged_design(&[&rows[j], &rows[i]], order, len), &targets[j]) else {
            return 0.0;
        };
        (rss_r / rss_f.max(rss_r * MIN_RSS_RATIO)).ln().max(0.0)
    });
    Ok(ReconstructionResult::new("granger", w, true).param("order", order as f64))
}
