//! Plug-in information-theoretic estimators on discretised rows.

use super::{check_series, pairwise, ReconstructionResult};
use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};

/// Equal-width binning of one row over its own `[min, max]`.
pub(crate) fn discretize(row: &[f64], bins: usize) -> Vec<usize> {
    let (lo, hi) = row
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi <= lo {
        return vec![0; row.len()];
    }
    let width = hi - lo;
    row.iter()
        .map(|&x| (((x - lo) / width * bins as f64).floor() as usize).min(bins - 1))
        .collect()
}

/// 1 above the row median, 0 otherwise.
///
/// When the median equals the row maximum (e.g. binary data with a
/// majority of ones) nothing lies strictly above it, so values equal to
/// the median map to 1 instead. Constant rows stay all 0.
pub(crate) fn binarize_at_median(row: &[f64]) -> Vec<usize> {
    let mut sorted = row.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    let above: Vec<usize> = row.iter().map(|&x| usize::from(x > median)).collect();
    let constant = sorted[0] == sorted[m - 1];
    if above.iter().all(|&b| b == 0) && !constant {
        row.iter().map(|&x| usize::from(x >= median)).collect()
    } else {
        above
    }
}

/// Mutual information in bits between two symbol streams over `k` symbols.
pub(crate) fn mutual_information_bits(x: &[usize], y: &[usize], k: usize) -> f64 {
    let len = x.len() as f64;
    let mut joint = vec![0usize; k * k];
    let mut px = vec![0usize; k];
    let mut py = vec![0usize; k];
    for (&a, &b) in x.iter().zip(y) {
        joint[a * k + b] += 1;
        px[a] += 1;
        py[b] += 1;
    }
    let mut mi = 0.0;
    for a in 0..k {
        for b in 0..k {
            let c = joint[a * k + b];
            if c > 0 {
                let ratio = (c as f64 * len) / (px[a] as f64 * py[b] as f64);
                mi += c as f64 / len * ratio.log2();
            }
        }
    }
    mi.max(0.0)
}

/// Transfer entropy `source -> target` in bits, history length 1, binary symbols.
pub(crate) fn transfer_entropy_bits(source: &[usize], target: &[usize]) -> f64 {
    let steps = target.len() - 1;
    // index: next * 4 + current * 2 + source
    let mut abc = [0usize; 8];
    for t in 0..steps {
        abc[target[t + 1] * 4 + target[t] * 2 + source[t]] += 1;
    }
    let count_bc = |b: usize, c: usize| abc[b * 2 + c] + abc[4 + b * 2 + c];
    let count_ab = |a: usize, b: usize| abc[a * 4 + b * 2] + abc[a * 4 + b * 2 + 1];
    let count_b = |b: usize| count_bc(b, 0) + count_bc(b, 1);

    let total = steps as f64;
    let mut te = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let n_abc = abc[a * 4 + b * 2 + c];
                if n_abc == 0 {
                    continue;
                }
                let (n_bc, n_ab, n_b) = (count_bc(b, c), count_ab(a, b), count_b(b));
                if n_bc == 0 || n_ab == 0 || n_b == 0 {
                    continue;
                }
                let ratio = (n_abc as f64 * n_b as f64) / (n_bc as f64 * n_ab as f64);
                te += n_abc as f64 / total * ratio.log2();
            }
        }
    }
    te.max(0.0)
}

/// Pairwise mutual information (bits) between equal-width binned rows.
pub fn reconstruct_mutual_information(ts: &TimeSeriesMatrix, bins: usize) -> Result<ReconstructionResult> {
    check_series(ts)?;
    if bins < 2 {
        return Err(Error::param(format!("bins must be at least 2, got {bins}")));
    }
    let symbols: Vec<Vec<usize>> = (0..ts.n_nodes()).map(|i| discretize(&ts.row(i), bins)).collect();
    let w = pairwise(ts.n_nodes(), true, |i, j| mutual_information_bits(&symbols[i], &symbols[j], bins));
    Ok(ReconstructionResult::new("mutual_information", w, false).param("bins", bins as f64))
}

/// Pairwise transfer entropy (bits) between median-binarised rows.
pub fn reconstruct_transfer_entropy(ts: &TimeSeriesMatrix) -> Result<ReconstructionResult> {
    check_series(ts)?;
    let symbols: Vec<Vec<usize>> = (0..ts.n_nodes()).map(|i| binarize_at_median(&ts.row(i))).collect();
    let w = pairwise(ts.n_nodes(), false, |i, j| transfer_entropy_bits(&symbols[i], &symbols[j]));
    Ok(ReconstructionResult::new("transfer_entropy", w, true))
}
