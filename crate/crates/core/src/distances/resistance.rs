use nalgebra::DMatrix;

use super::{check_pair, DistanceConfig, DistanceValue, Measure};
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::linalg::pseudoinverse;

/// Effective resistance between every node pair with unit-resistor edges.
pub fn effective_resistance(g: &Graph) -> Result<DMatrix<f64>> {
    g.require_undirected("effective resistance")?;
    if !g.is_connected() {
        return Err(Error::Precondition(
            "effective resistance requires a connected graph".into(),
        ));
    }
    let lp = pseudoinverse(&laplacian(g)?)?;
    let n = g.n();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            lp[(i, i)] + lp[(j, j)] - 2.0 * lp[(i, j)]
        }
    }))
}

/// `(Σ_{i≠j} |R1_ij − R2_ij|^p)^{1/p}` over ordered pairs.
pub fn dist_resistance_perturbation(g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Result<DistanceValue> {
    check_pair(g1, g2, true)?;
    cfg.validate()?;
    let r1 = effective_resistance(g1)?;
    let r2 = effective_resistance(g2)?;
    let diff = (r1 - r2).abs();
    let value = match cfg.p {
        1 => diff.sum(),
        _ => diff.norm(),
    };
    DistanceValue::new(Measure::ResistancePerturbation, value)
}
