//! Simulate node dynamics on networks, reconstruct networks from the
//! resulting time series, and compare graphs with a family of distances.

pub mod cli;
pub mod distances;
pub mod dynamics;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod reconstruction;
pub mod rng;

pub use error::{Error, Result};
pub use graph::Graph;
