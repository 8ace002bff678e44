//! Turning a weight matrix into a reconstructed graph.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::ReconstructionResult;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// How to binarise a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdSpec {
    /// Keep the top fraction `q` of candidate pairs.
    Quantile(f64),
    /// Keep pairs with `|w| > tau`.
    Absolute(f64),
    /// Keep enough pairs for the given mean degree.
    TargetDegree(f64),
    /// Keep as many pairs as the ground truth has edges.
    MatchDensity,
}

impl FromStr for ThresholdSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("threshold must be quantile:q, abs:tau, degree:k or density, got `{s}`"));
        if s == "density" {
            return Ok(ThresholdSpec::MatchDensity);
        }
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        match kind {
            "quantile" => Ok(ThresholdSpec::Quantile(value)),
            "abs" => Ok(ThresholdSpec::Absolute(value)),
            "degree" => Ok(ThresholdSpec::TargetDegree(value)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ThresholdSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdSpec::Quantile(q) => write!(f, "quantile:{q}"),
            ThresholdSpec::Absolute(t) => write!(f, "abs:{t}"),
            ThresholdSpec::TargetDegree(k) => write!(f, "degree:{k}"),
            ThresholdSpec::MatchDensity => f.write_str("density"),
        }
    }
}

impl ThresholdSpec {
    /// Binarise `r`; `truth_edges` is the edge count that `MatchDensity` aims for.
    pub fn apply(&self, r: &ReconstructionResult, truth_edges: usize) -> Result<Graph> {
        match *self {
            ThresholdSpec::Quantile(q) => threshold_quantile(r, q),
            ThresholdSpec::Absolute(t) => threshold_absolute(r, t),
            ThresholdSpec::TargetDegree(k) => threshold_target_degree(r, k),
            ThresholdSpec::MatchDensity => {
                let pairs = candidate_pairs(r).len();
                let q = if pairs == 0 { 0.0 } else { (truth_edges as f64 / pairs as f64).min(1.0) };
                threshold_quantile(r, q)
            }
        }
    }
}

fn candidate_pairs(r: &ReconstructionResult) -> Vec<(usize, usize)> {
    let n = r.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && (r.directed || i < j) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn graph_from_pairs(r: &ReconstructionResult, kept: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
    let n = r.n();
    let mut w = DMatrix::zeros(n, n);
    for (i, j) in kept {
        w[(i, j)] = 1.0;
        if !r.directed {
            w[(j, i)] = 1.0;
        }
    }
    Graph::new(w, r.directed)
}

/// Keep the `ceil(q * P)` strongest pairs by `|w|` among the `P` candidates.
///
/// Ties at the cut keep the lexicographically earlier `(row, col)` pairs.
/// Pairs with zero weight never become edges.
pub fn threshold_quantile(r: &ReconstructionResult, q: f64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("quantile {q} outside [0, 1]")));
    }
    let mut pairs = candidate_pairs(r);
    let total = pairs.len();
    let keep = ((q * total as f64 - 1e-9).ceil().max(0.0) as usize).min(total);
    // stable sort keeps lexicographic order among equal magnitudes
    pairs.sort_by(|&(a, b), &(c, d)| r.weights[(c, d)].abs().total_cmp(&r.weights[(a, b)].abs()));
    graph_from_pairs(
        r,
        pairs.into_iter().take(keep).filter(|&(i, j)| r.weights[(i, j)] != 0.0),
    )
}

/// Edge wherever `|w| > tau`.
pub fn threshold_absolute(r: &ReconstructionResult, tau: f64) -> Result<Graph> {
    if !(tau >= 0.0) {
        return Err(Error::param(format!("threshold {tau} must be non-negative")));
    }
    let kept: Vec<_> = candidate_pairs(r)
        .into_iter()
        .filter(|&(i, j)| r.weights[(i, j)].abs() > tau)
        .collect();
    graph_from_pairs(r, kept)
}

/// Quantile threshold chosen to hit a target mean degree.
pub fn threshold_target_degree(r: &ReconstructionResult, k_avg: f64) -> Result<Graph> {
    if !(k_avg > 0.0) {
        return Err(Error::param(format!("target degree {k_avg} must be positive")));
    }
    let n = r.n() as f64;
    let pairs = candidate_pairs(r).len() as f64;
    if pairs == 0.0 {
        return threshold_quantile(r, 0.0);
    }
    let wanted_edges = if r.directed { k_avg * n } else { k_avg * n / 2.0 };
    threshold_quantile(r, (wanted_edges / pairs).min(1.0))
}
