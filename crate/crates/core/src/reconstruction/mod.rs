//! Network reconstruction: time series in, pairwise weight matrix out.
//!
//! Directed methods score the influence `i -> j` at `weights[(i, j)]`.
//! Symmetric methods fill both triangles. Every method returns a total
//! result on valid input; degenerate pairs (zero variance, singular fits)
//! get weight 0.

mod correlation;
mod glasso;
mod granger;
mod information;
mod ising;
mod threshold;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};

pub use correlation::{covariance, reconstruct_correlation, reconstruct_partial_correlation, CorrelationMode};
pub use glasso::{reconstruct_graphical_lasso, GraphicalLassoOptions};
pub use granger::reconstruct_granger;
pub use information::{reconstruct_mutual_information, reconstruct_transfer_entropy};
pub use ising::{reconstruct_mean_field_ising, IsingVariant};
pub use threshold::{threshold_absolute, threshold_quantile, threshold_target_degree, ThresholdSpec};

/// Minimum number of timesteps accepted by every reconstructor.
pub const MIN_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub method: String,
    pub weights: DMatrix<f64>,
    pub directed: bool,
    pub params: BTreeMap<String, f64>,
}

impl ReconstructionResult {
    pub(crate) fn new(method: &str, weights: DMatrix<f64>, directed: bool) -> Self {
        ReconstructionResult {
            method: method.to_string(),
            weights,
            directed,
            params: BTreeMap::new(),
        }
    }

    /// Wrap an externally computed weight matrix.
    ///
    /// The matrix must be square and finite with a zero diagonal, and
    /// symmetric unless `directed`.
    pub fn from_weights(method: &str, weights: DMatrix<f64>, directed: bool) -> Result<Self> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(Error::Input(format!("weight matrix must be square, got {}x{}", n, weights.ncols())));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NumericalInput("weight matrix has non-finite entries".into()));
        }
        if (0..n).any(|i| weights[(i, i)] != 0.0) {
            return Err(Error::Input("weight matrix diagonal must be zero".into()));
        }
        if !directed && weights != weights.transpose() {
            return Err(Error::Input("undirected weight matrix must be symmetric".into()));
        }
        Ok(Self::new(method, weights, directed))
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    /// False only when an iterative method hit its iteration budget.
    pub fn converged(&self) -> bool {
        self.params.get("converged").is_none_or(|&c| c != 0.0)
    }

    /// Undirected view: `max(|w_ij|, |w_ji|)` in both triangles.
    pub fn symmetrized(&self) -> ReconstructionResult {
        let w = &self.weights;
        let sym = DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| w[(i, j)].abs().max(w[(j, i)].abs()));
        ReconstructionResult {
            method: self.method.clone(),
            weights: sym,
            directed: false,
            params: self.params.clone(),
        }
    }
}

pub(crate) fn check_series(ts: &TimeSeriesMatrix) -> Result<()> {
    if ts.n_steps() < MIN_STEPS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_STEPS} timesteps, got {}",
            ts.n_steps()
        )));
    }
    Ok(())
}

/// Fill an `n x n` matrix from an independent per-ordered-pair score.
///
/// Pairs are evaluated in parallel; each entry is computed on its own so
/// the result does not depend on scheduling.
pub(crate) fn pairwise<F>(n: usize, symmetric: bool, score: F) -> DMatrix<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j || (symmetric && j < i) {
                        0.0
                    } else {
                        score(i, j)
                    }
                })
                .collect()
        })
        .collect();
    let mut w = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    if symmetric {
        for i in 0..n {
            for j in 0..i {
                w[(i, j)] = w[(j, i)];
            }
        }
    }
    w
}

/// A reconstruction method with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Correlation { mode: CorrelationMode },
    PartialCorrelation,
    GraphicalLasso(GraphicalLassoOptions),
    MutualInformation { bins: usize },
    Granger { order: usize },
    TransferEntropy,
    MeanFieldIsing { variant: IsingVariant },
}

pub const METHOD_NAMES: [&str; 7] = [
    "correlation",
    "partial_correlation",
    "graphical_lasso",
    "mutual_information",
    "granger",
    "transfer_entropy",
    "mean_field_ising",
];

fn take_f64(params: &mut BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match params.remove(key) {
        None => Ok(default),
        Some(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::param(format!("`{key}` expects a number, got `{v}`"))),
    }
}

fn take_usize(params: &mut BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match params.remove(key) {
        None => Ok(default),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::param(format!("`{key}` expects a non-negative integer, got `{v}`"))),
    }
}

impl Method {
    /// Look a method up by name, consuming `key=value` parameters.
    pub fn from_name(name: &str, params: &BTreeMap<String, String>) -> Result<Method> {
        let mut p = params.clone();
        let method = match name {
            "correlation" => Method::Correlation {
                mode: match p.remove("mode") {
                    None => CorrelationMode::Absolute,
                    Some(m) => m.parse()?,
                },
            },
            "partial_correlation" => Method::PartialCorrelation,
            "graphical_lasso" => {
                let d = GraphicalLassoOptions::default();
                Method::GraphicalLasso(GraphicalLassoOptions {
                    alpha: take_f64(&mut p, "alpha", d.alpha)?,
                    tol: take_f64(&mut p, "tol", d.tol)?,
                    max_sweeps: take_usize(&mut p, "max_sweeps", d.max_sweeps)?,
                })
            }
            "mutual_information" => Method::MutualInformation {
                bins: take_usize(&mut p, "bins", 8)?,
            },
            "granger" => Method::Granger {
                order: take_usize(&mut p, "order", 1)?,
            },
            "transfer_entropy" => Method::TransferEntropy,
            "mean_field_ising" => Method::MeanFieldIsing {
                variant: match p.remove("variant") {
                    None => IsingVariant::Tap,
                    Some(v) => v.parse()?,
                },
            },
            other => {
                return Err(Error::UnknownName {
                    kind: "method",
                    name: other.to_string(),
                    valid: METHOD_NAMES.to_vec(),
                })
            }
        };
        if let Some(k) = p.keys().next() {
            return Err(Error::param(format!("method `{name}` does not accept parameter `{k}`")));
        }
        Ok(method)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Correlation { .. } => "correlation",
            Method::PartialCorrelation => "partial_correlation",
            Method::GraphicalLasso(_) => "graphical_lasso",
            Method::MutualInformation { .. } => "mutual_information",
            Method::Granger { .. } => "granger",
            Method::TransferEntropy => "transfer_entropy",
            Method::MeanFieldIsing { .. } => "mean_field_ising",
        }
    }

    pub fn run(&self, ts: &TimeSeriesMatrix) -> Result<ReconstructionResult> {
        match *self {
            Method::Correlation { mode } => reconstruct_correlation(ts, mode),
            Method::PartialCorrelation => reconstruct_partial_correlation(ts),
            Method::GraphicalLasso(ref opts) => reconstruct_graphical_lasso(ts, opts),
            Method::MutualInformation { bins } => reconstruct_mutual_information(ts, bins),
            Method::Granger { order } => reconstruct_granger(ts, order),
            Method::TransferEntropy => reconstruct_transfer_entropy(ts),
            Method::MeanFieldIsing { variant } => reconstruct_mean_field_ising(ts, variant),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
