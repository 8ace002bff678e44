//! Graph distance measures.
//!
//! All measures take two undirected simple graphs and return a
//! non-negative, symmetric value that is zero for identical inputs. Most
//! work on the 0/1 adjacency; Frobenius uses the edge weights. Measures
//! marked same-size reject graphs with different node counts.

mod deltacon;
mod elementwise;
mod netsimile;
mod resistance;
mod spectral;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use deltacon::{deltacon_affinity, dist_deltacon};
pub use elementwise::{dist_degree_jsd, dist_frobenius, dist_hamming, dist_jaccard};
pub use netsimile::{dist_netsimile, netsimile_signature, NETSIMILE_AGGREGATES, NETSIMILE_FEATURES};
pub use resistance::{dist_resistance_perturbation, effective_resistance};
pub use spectral::{dist_him, dist_ipsen_mikhailov, dist_laplacian_spectrum, SpectralDensity};

/// Tunable parameters of the spectral and resistance measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceConfig {
    /// Lorentzian half-width for Ipsen–Mikhailov.
    pub gamma: f64,
    /// HIM weight of the spectral term.
    pub xi: f64,
    /// Norm exponent for resistance perturbation, 1 or 2.
    pub p: u32,
    /// Simpson intervals for the spectral-density integral.
    pub grid_points: usize,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            gamma: 0.08,
            xi: 1.0,
            p: 1,
            grid_points: 1 << 14,
        }
    }
}

impl DistanceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::param(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.xi >= 0.0) || !self.xi.is_finite() {
            return Err(Error::param(format!("xi must be non-negative, got {}", self.xi)));
        }
        if self.p != 1 && self.p != 2 {
            return Err(Error::param(format!("p must be 1 or 2, got {}", self.p)));
        }
        if self.grid_points < 1 << 10 {
            return Err(Error::param(format!("grid_points must be at least 1024, got {}", self.grid_points)));
        }
        Ok(())
    }

    /// Apply a `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::param(format!("invalid value `{value}` for `{key}`"));
        match key {
            "gamma" => self.gamma = value.parse().map_err(|_| bad())?,
            "xi" => self.xi = value.parse().map_err(|_| bad())?,
            "p" => self.p = value.parse().map_err(|_| bad())?,
            "grid_points" => self.grid_points = value.parse().map_err(|_| bad())?,
            _ => {
                return Err(Error::param(format!(
                    "unknown distance parameter `{key}` (accepted: gamma, xi, p, grid_points)"
                )))
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceValue {
    pub measure: String,
    pub value: f64,
}

impl DistanceValue {
    pub(crate) fn new(measure: Measure, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NumericalFailure(format!("{measure} produced {value}")));
        }
        Ok(DistanceValue {
            measure: measure.name().to_string(),
            value: value.max(0.0),
        })
    }
}

pub(crate) fn check_pair(g1: &Graph, g2: &Graph, same_size: bool) -> Result<()> {
    g1.require_undirected("graph distances")?;
    g2.require_undirected("graph distances")?;
    if same_size && g1.n() != g2.n() {
        return Err(Error::SizeMismatch {
            left: g1.n(),
            right: g2.n(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Hamming,
    Jaccard,
    Frobenius,
    DegreeJsd,
    LaplacianSpectrum,
    IpsenMikhailov,
    Him,
    DeltaCon,
    ResistancePerturbation,
    NetSimile,
}

impl Measure {
    /// Registry order, also the order of [`distance_all`] results.
    pub const ALL: [Measure; 10] = [
        Measure::Hamming,
        Measure::Jaccard,
        Measure::Frobenius,
        Measure::DegreeJsd,
        Measure::LaplacianSpectrum,
        Measure::IpsenMikhailov,
        Measure::Him,
        Measure::DeltaCon,
        Measure::ResistancePerturbation,
        Measure::NetSimile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Hamming => "hamming",
            Measure::Jaccard => "jaccard",
            Measure::Frobenius => "frobenius",
            Measure::DegreeJsd => "degree_jsd",
            Measure::LaplacianSpectrum => "laplacian_spectrum",
            Measure::IpsenMikhailov => "ipsen_mikhailov",
            Measure::Him => "him",
            Measure::DeltaCon => "deltacon",
            Measure::ResistancePerturbation => "resistance_perturbation",
            Measure::NetSimile => "netsimile",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|m| m.name()).collect()
    }

    pub fn requires_same_size(self) -> bool {
        !matches!(
            self,
            Measure::DegreeJsd | Measure::LaplacianSpectrum | Measure::IpsenMikhailov | Measure::NetSimile
        )
    }

    pub fn compute(self, g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Result<DistanceValue> {
        match self {
            Measure::Hamming => dist_hamming(g1, g2),
            Measure::Jaccard => dist_jaccard(g1, g2),
            Measure::Frobenius => dist_frobenius(g1, g2),
            Measure::DegreeJsd => dist_degree_jsd(g1, g2),
            Measure::LaplacianSpectrum => dist_laplacian_spectrum(g1, g2),
            Measure::IpsenMikhailov => dist_ipsen_mikhailov(g1, g2, cfg),
            Measure::Him => dist_him(g1, g2, cfg),
            Measure::DeltaCon => dist_deltacon(g1, g2),
            Measure::ResistancePerturbation => dist_resistance_perturbation(g1, g2, cfg),
            Measure::NetSimile => dist_netsimile(g1, g2),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "measure",
                name: s.to_string(),
                valid: Self::names(),
            })
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceStatus {
    Ok,
    SizeMismatch,
    PreconditionFailed,
    UnsupportedInput,
    NumericalFailure,
    InvalidParameter,
}

impl DistanceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceStatus::Ok => "ok",
            DistanceStatus::SizeMismatch => "size_mismatch",
            DistanceStatus::PreconditionFailed => "precondition_failed",
            DistanceStatus::UnsupportedInput => "unsupported_input",
            DistanceStatus::NumericalFailure => "numerical_failure",
            DistanceStatus::InvalidParameter => "invalid_parameter",
        }
    }
}

/// One row of a [`distance_all`] report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceOutcome {
    pub measure: &'static str,
    pub status: DistanceStatus,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl DistanceOutcome {
    pub fn from_result(measure: Measure, result: Result<DistanceValue>) -> Self {
        match result {
            Ok(v) => DistanceOutcome {
                measure: measure.name(),
                status: DistanceStatus::Ok,
                value: Some(v.value),
                message: None,
            },
            Err(e) => {
                let status = match e {
                    Error::SizeMismatch { .. } => DistanceStatus::SizeMismatch,
                    Error::Precondition(_) => DistanceStatus::PreconditionFailed,
                    Error::UnsupportedInput(_) => DistanceStatus::UnsupportedInput,
                    Error::Parameter(_) => DistanceStatus::InvalidParameter,
                    _ => DistanceStatus::NumericalFailure,
                };
                DistanceOutcome {
                    measure: measure.name(),
                    status,
                    value: None,
                    message: Some(e.to_string()),
                }
            }
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == DistanceStatus::Ok
    }
}

/// Every measure, in registry order. Failures are reported per entry.
pub fn distance_all(g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Vec<DistanceOutcome> {
    Measure::ALL
        .par_iter()
        .map(|&m| DistanceOutcome::from_result(m, m.compute(g1, g2, cfg)))
        .collect()
}
