//! Scoring reconstructions against a ground-truth graph.
//!
//! Candidate pairs are the unordered node pairs `i < j`. Directed
//! reconstructions are first collapsed with `max(|w_ij|, |w_ji|)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reconstruction::{ReconstructionResult, ThresholdSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeScoreReport {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
    /// Truth had no edges or no non-edges, so `auc` is the 0.5 placeholder.
    pub auc_degenerate: bool,
    /// The threshold cut through a group of equal weights; the
    /// lexicographically earlier pairs were kept.
    pub ties_at_cut: bool,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn check_sizes(truth: &Graph, n: usize) -> Result<()> {
    truth.require_undirected("evaluation ground truth")?;
    if truth.n() != n {
        return Err(Error::SizeMismatch {
            left: truth.n(),
            right: n,
        });
    }
    Ok(())
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

fn undirected_view(r: &ReconstructionResult) -> ReconstructionResult {
    if r.directed {
        r.symmetrized()
    } else {
        r.clone()
    }
}

/// Confusion counts of `thresholded` against `truth` over unordered pairs.
///
/// The `auc` fields are filled from `r`.
pub fn confusion_at_threshold(truth: &Graph, r: &ReconstructionResult, thresholded: &Graph) -> Result<EdgeScoreReport> {
    check_sizes(truth, r.n())?;
    if thresholded.n() != truth.n() {
        return Err(Error::SizeMismatch {
            left: truth.n(),
            right: thresholded.n(),
        });
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (i, j) in upper_pairs(truth.n()) {
        let predicted = thresholded.has_edge(i, j) || thresholded.has_edge(j, i);
        match (truth.has_edge(i, j), predicted) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let precision = ratio(tp as f64, (tp + fp) as f64);
    let recall = ratio(tp as f64, (tp + fn_) as f64);
    let f1 = ratio(2.0 * precision * recall, precision + recall);
    let (auc, auc_degenerate) = auc_with_flag(truth, r)?;
    Ok(EdgeScoreReport {
        tp,
        fp,
        fn_,
        tn,
        precision,
        recall,
        f1,
        auc,
        auc_degenerate,
        ties_at_cut: false,
    })
}

/// Mann–Whitney AUC with average ranks, plus whether truth was degenerate.
pub fn auc_with_flag(truth: &Graph, r: &ReconstructionResult) -> Result<(f64, bool)> {
    check_sizes(truth, r.n())?;
    let sym = undirected_view(r);
    let mut scored: Vec<(f64, bool)> = upper_pairs(truth.n())
        .map(|(i, j)| (sym.weights[(i, j)].abs(), truth.has_edge(i, j)))
        .collect();
    let positives = scored.iter().filter(|s| s.1).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Ok((0.5, true));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < scored.len() {
        let mut end = start;
        while end + 1 < scored.len() && scored[end + 1].0 == scored[start].0 {
            end += 1;
        }
        // ranks are 1-based; the tie group shares the mean of start+1..=end+1
        let avg_rank = (start + end) as f64 / 2.0 + 1.0;
        let in_group = scored[start..=end].iter().filter(|s| s.1).count();
        rank_sum += avg_rank * in_group as f64;
        start = end + 1;
    }
    let (p, q) = (positives as f64, negatives as f64);
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(((u / (p * q)).clamp(0.0, 1.0), false))
}

/// Rank-based AUC of `|w|` (max-symmetrised) with true edges as positives.
///
/// Returns 0.5 when the truth has no edges or is complete.
pub fn auc_score(truth: &Graph, r: &ReconstructionResult) -> Result<f64> {
    auc_with_flag(truth, r).map(|(auc, _)| auc)
}

fn cut_splits_tie(sym: &ReconstructionResult, kept: &Graph) -> bool {
    let mut kept_values = Vec::new();
    let mut dropped_values = Vec::new();
    for (i, j) in upper_pairs(sym.n()) {
        let w = sym.weights[(i, j)].abs();
        if kept.has_edge(i, j) {
            kept_values.push(w);
        } else {
            dropped_values.push(w);
        }
    }
    let lowest_kept = kept_values.iter().copied().fold(f64::INFINITY, f64::min);
    let highest_dropped = dropped_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if kept_values.is_empty() {
        return dropped_values.len() > 1 && dropped_values.iter().all(|&w| w == dropped_values[0]);
    }
    lowest_kept == highest_dropped
}

/// Symmetrise, threshold, and score in one step.
pub fn score_reconstruction(truth: &Graph, r: &ReconstructionResult, spec: ThresholdSpec) -> Result<EdgeScoreReport> {
    check_sizes(truth, r.n())?;
    let sym = undirected_view(r);
    let thresholded = spec.apply(&sym, truth.edge_count())?;
    let mut report = confusion_at_threshold(truth, &sym, &thresholded)?;
    report.ties_at_cut = cut_splits_tie(&sym, &thresholded);
    Ok(report)
}
