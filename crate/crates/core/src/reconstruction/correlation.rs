use std::str::FromStr;

use nalgebra::DMatrix;

use super::{check_series, pairwise, ReconstructionResult};
use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};
use crate::linalg::pseudoinverse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrelationMode {
    Signed,
    #[default]
    Absolute,
}

impl FromStr for CorrelationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(CorrelationMode::Signed),
            "absolute" => Ok(CorrelationMode::Absolute),
            _ => Err(Error::param(format!("correlation mode must be `signed` or `absolute`, got `{s}`"))),
        }
    }
}

/// Mean-centred rows, with constant rows flagged.
pub(crate) struct CenteredRows {
    pub rows: Vec<Vec<f64>>,
    pub constant: Vec<bool>,
}

pub(crate) fn centered_rows(ts: &TimeSeriesMatrix) -> CenteredRows {
    let v = ts.values();
    let l = ts.n_steps() as f64;
    let mut rows = Vec::with_capacity(ts.n_nodes());
    let mut constant = Vec::with_capacity(ts.n_nodes());
    for r in v.row_iter() {
        let first = r[0];
        constant.push(r.iter().all(|&x| x == first));
        let mean = r.iter().sum::<f64>() / l;
        rows.push(r.iter().map(|x| x - mean).collect());
    }
    CenteredRows { rows, constant }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Population (1/L) covariance of the rows.
pub fn covariance(ts: &TimeSeriesMatrix) -> DMatrix<f64> {
    let c = centered_rows(ts);
    let n = ts.n_nodes();
    let l = ts.n_steps() as f64;
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if c.constant[i] || c.constant[j] {
                0.0
            } else {
                dot(&c.rows[i], &c.rows[j]) / l
            };
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// Pearson correlation between rows; constant rows score 0 against everything.
pub fn reconstruct_correlation(ts: &TimeSeriesMatrix, mode: CorrelationMode) -> Result<ReconstructionResult> {
    check_series(ts)?;
    let c = centered_rows(ts);
    let sq: Vec<f64> = c.rows.iter().map(|r| dot(r, r)).collect();
    let w = pairwise(ts.n_nodes(), true, |i, j| {
        if c.constant[i] || c.constant[j] || sq[i] == 0.0 || sq[j] == 0.0 {
            return 0.0;
        }
        let r = (dot(&c.rows[i], &c.rows[j]) / (sq[i].sqrt() * sq[j].sqrt())).clamp(-1.0, 1.0);
        match mode {
            CorrelationMode::Signed => r,
            CorrelationMode::Absolute => r.abs(),
        }
    });
    let signed = if mode == CorrelationMode::Signed { 1.0 } else { 0.0 };
    Ok(ReconstructionResult::new("correlation", w, false).param("signed", signed))
}

/// `-P_ij / sqrt(P_ii P_jj)` for a precision matrix `P`; pairs with a
/// non-positive diagonal product get 0.
pub(crate) fn precision_to_partial(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        let d = p[(i, i)] * p[(j, j)];
        if d <= 0.0 {
            0.0
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            -p[(a, b)] / d.sqrt()
        }
    })
}

/// Partial correlation from the pseudoinverse of the covariance.
pub fn reconstruct_partial_correlation(ts: &TimeSeriesMatrix) -> Result<ReconstructionResult> {
    check_series(ts)?;
    let precision = pseudoinverse(&covariance(ts))?;
    Ok(ReconstructionResult::new(
        "partial_correlation",
        precision_to_partial(&precision),
        false,
    ))
}
