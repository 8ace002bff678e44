//! Mean-field inversion of an Ising model from spin time series.

use std::str::FromStr;

use nalgebra::DMatrix;

use super::{check_series, ReconstructionResult};
use crate::dynamics::TimeSeriesMatrix;
use crate::error::{Error, Result};
use crate::linalg::pseudoinverse;

const SMALL_MAGNETIZATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsingVariant {
    /// Naive mean field: `J = -C⁻¹`.
    Nmf,
    /// Naive mean field plus the Onsager reaction term.
    #[default]
    Tap,
}

impl FromStr for IsingVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nmf" => Ok(IsingVariant::Nmf),
            "tap" => Ok(IsingVariant::Tap),
            _ => Err(Error::param(format!("ising variant must be `nmf` or `tap`, got `{s}`"))),
        }
    }
}

/// Solve `2 m_i m_j J² + J + P_ij = 0` for the root that tends to the
/// naive value `-P_ij` as the magnetisations vanish.
fn tap_coupling(mi: f64, mj: f64, p: f64) -> f64 {
    let mm = mi * mj;
    let disc = 1.0 - 8.0 * mm * p;
    if mm.abs() < SMALL_MAGNETIZATION || disc < 0.0 {
        -p
    } else {
        (-1.0 + disc.sqrt()) / (4.0 * mm)
    }
}

/// Couplings of a kinetic Ising model inferred from `±1` spin series.
pub fn reconstruct_mean_field_ising(ts: &TimeSeriesMatrix, variant: IsingVariant) -> Result<ReconstructionResult> {
    check_series(ts)?;
    let v = ts.values();
    if let Some(bad) = v.iter().find(|&&s| s != 1.0 && s != -1.0) {
        return Err(Error::Input(format!("mean-field Ising inference needs ±1 spins, found {bad}")));
    }
    let n = ts.n_nodes();
    let l = ts.n_steps() as f64;
    let m: Vec<f64> = v.row_iter().map(|r| r.sum() / l).collect();
    let mut c = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let sij = v.row(i).dot(&v.row(j)) / l;
            let cij = sij - m[i] * m[j];
            c[(i, j)] = cij;
            c[(j, i)] = cij;
        }
    }
    let p = pseudoinverse(&c)?;
    let j = DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            return 0.0;
        }
        match variant {
            IsingVariant::Nmf => -p[(a, b)],
            IsingVariant::Tap => tap_coupling(m[a], m[b], p[(a, b)]),
        }
    });
    let weights = (&j + j.transpose()) * 0.5;
    let tap = if variant == IsingVariant::Tap { 1.0 } else { 0.0 };
    Ok(ReconstructionResult::new("mean_field_ising", weights, false).param("tap", tap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tap_root_solves_quadratic() {
        for &(mi, mj, p) in &[(0.3, 0.5, -0.4), (-0.2, 0.6, 0.3), (0.9, 0.9, -0.05)] {
            let j: f64 = tap_coupling(mi, mj, p);
            let residual = 2.0 * mi * mj * j * j + j + p;
            assert!(residual.abs() < 1e-12, "{residual}");
            // continuous with the naive value for small corrections
            assert!((j + p).abs() < p.abs());
        }
        assert_eq!(tap_coupling(0.0, 0.5, -0.4), 0.4);
        // negative discriminant falls back
        assert_eq!(tap_coupling(1.0, 1.0, 1.0), -1.0);
    }

    #[test]
    fn balanced_spins_make_tap_equal_nmf() {
        // every row has mean exactly zero
        let rows = [
            [1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0],
        ];
        let ts = TimeSeriesMatrix::new(DMatrix::from_fn(3, 12, |i, t| rows[i][t])).unwrap();
        let tap = reconstruct_mean_field_ising(&ts, IsingVariant::Tap).unwrap();
        let nmf = reconstruct_mean_field_ising(&ts, IsingVariant::Nmf).unwrap();
        assert_eq!(tap.weights, nmf.weights);
        assert_eq!(tap.weights, tap.weights.transpose());
        assert!((0..3).all(|i| tap.weights[(i, i)] == 0.0));
    }

    #[test]
    fn non_spin_values_rejected() {
        let ts = TimeSeriesMatrix::new(DMatrix::from_fn(2, 12, |_, t| t as f64)).unwrap();
        assert!(matches!(
            reconstruct_mean_field_ising(&ts, IsingVariant::Tap),
            Err(Error::Input(_))
        ));
    }
}
