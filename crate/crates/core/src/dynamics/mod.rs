//! Node-level dynamics simulated on a fixed graph.
//!
//! Every simulator returns an `N x L` [`TimeSeriesMatrix`] whose column 0 is
//! the initial condition. All discrete models update synchronously from the
//! state at time `t`, and all randomness (including the initial state) is
//! drawn from the config seed.

mod models;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use models::{
    simulate_diffusion, simulate_ising_glauber, simulate_kuramoto, simulate_random_walker, simulate_sis,
    simulate_voter,
};

/// Multivariate time series, one row per node and one column per timestep.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesMatrix {
    values: DMatrix<f64>,
}

impl TimeSeriesMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() < 1 || values.ncols() < 2 {
            return Err(Error::Input(format!(
                "time series needs at least 1 node and 2 timesteps, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("time series has non-finite entries".into()));
        }
        Ok(TimeSeriesMatrix { values })
    }

    pub fn n_nodes(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_steps(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.values
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.row(i).iter().copied().collect()
    }

    /// Element-wise `sin`, used to feed phase data to linear reconstructors.
    pub fn map_sin(&self) -> Self {
        TimeSeriesMatrix {
            values: self.values.map(f64::sin),
        }
    }
}

/// Simulation length, seed and model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub steps: usize,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
}

impl DynamicsConfig {
    pub fn new(steps: usize, seed: u64) -> Self {
        DynamicsConfig {
            steps,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn validate(&self, known: &[&str]) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::param(format!("steps must be at least 2, got {}", self.steps)));
        }
        for (k, v) in &self.params {
            if !known.contains(&k.as_str()) {
                return Err(Error::param(format!(
                    "unknown parameter `{k}` (accepted: {})",
                    known.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::param(format!("parameter `{k}` is not finite")));
            }
        }
        Ok(())
    }

    fn get(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    fn probability(&self, name: &str, default: f64) -> Result<f64> {
        let p = self.get(name, default);
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(Error::param(format!("`{name}` = {p} is not a probability")))
        }
    }
}

/// Registry of the available simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsModel {
    IsingGlauber,
    Sis,
    Voter,
    RandomWalker,
    Kuramoto,
    Diffusion,
}

impl DynamicsModel {
    pub const ALL: [DynamicsModel; 6] = [
        DynamicsModel::IsingGlauber,
        DynamicsModel::Sis,
        DynamicsModel::Voter,
        DynamicsModel::RandomWalker,
        DynamicsModel::Kuramoto,
        DynamicsModel::Diffusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DynamicsModel::IsingGlauber => "ising_glauber",
            DynamicsModel::Sis => "sis",
            DynamicsModel::Voter => "voter",
            DynamicsModel::RandomWalker => "random_walker",
            DynamicsModel::Kuramoto => "kuramoto",
            DynamicsModel::Diffusion => "diffusion",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|m| m.name()).collect()
    }

    pub fn simulate(self, g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
        match self {
            DynamicsModel::IsingGlauber => simulate_ising_glauber(g, config),
            DynamicsModel::Sis => simulate_sis(g, config),
            DynamicsModel::Voter => simulate_voter(g, config),
            DynamicsModel::RandomWalker => simulate_random_walker(g, config),
            DynamicsModel::Kuramoto => simulate_kuramoto(g, config),
            DynamicsModel::Diffusion => simulate_diffusion(g, config),
        }
    }
}

impl FromStr for DynamicsModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "dynamics",
                name: s.to_string(),
                valid: Self::names(),
            })
    }
}

impl fmt::Display for DynamicsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
