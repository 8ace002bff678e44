//! Python bindings for the `reconet` core library.
//!
//! Matrices cross the boundary as lists of row lists of floats.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use pyo3::exceptions::{PyArithmeticError, PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::reconet::distances::{distance_all as core_distance_all, DistanceConfig, Measure};
use ::reconet::dynamics::{DynamicsConfig, DynamicsModel, TimeSeriesMatrix};
use ::reconet::evaluation::score_reconstruction;
use ::reconet::reconstruction::{Method, ReconstructionResult, ThresholdSpec};
use ::reconet::{io, pipeline, Error};

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Io { .. } => PyOSError::new_err(msg),
        Error::UnknownName { .. } => PyKeyError::new_err(msg),
        Error::NumericalInput(_) | Error::NumericalFailure(_) => PyArithmeticError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn to_matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn text_params(params: Option<&Bound<'_, PyDict>>) -> PyResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    if let Some(d) = params {
        for (k, v) in d.iter() {
            out.insert(k.extract::<String>()?, v.str()?.to_string());
        }
    }
    Ok(out)
}

/// An undirected or directed weighted graph on nodes `0..n`.
#[pyclass(name = "Graph", module = "reconet")]
struct PyGraph {
    inner: ::reconet::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (weights, directed = false))]
    fn new(weights: Vec<Vec<f64>>, directed: bool) -> PyResult<Self> {
        let inner = ::reconet::Graph::new(to_matrix(&weights)?, directed).map_err(py_err)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = ::reconet::Graph::from_edges(n, &edges).map_err(py_err)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph { inner: ::reconet::Graph::complete(n) }
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph { inner: ::reconet::Graph::path(n) }
    }

    #[staticmethod]
    fn empty(n: usize) -> Self {
        PyGraph { inner: ::reconet::Graph::empty(n) }
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::read_edgelist(path).map_err(py_err)? })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        io::write_edgelist(&self.inner, path).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.is_directed()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges()
    }

    fn weights(&self) -> Vec<Vec<f64>> {
        to_rows(self.inner.weights())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={}, directed={})",
            self.inner.n(),
            self.inner.edge_count(),
            self.inner.is_directed()
        )
    }
}

/// Pairwise scores produced by a reconstruction method.
#[pyclass(name = "Reconstruction", module = "reconet")]
struct PyReconstruction {
    inner: ReconstructionResult,
}

#[pymethods]
impl PyReconstruction {
    #[getter]
    fn method(&self) -> String {
        self.inner.method.clone()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.directed
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged()
    }

    fn weights(&self) -> Vec<Vec<f64>> {
        to_rows(&self.inner.weights)
    }

    /// Binarize with a threshold such as `"quantile:0.1"`, `"abs:0.3"` or `"degree:4"`.
    #[pyo3(signature = (spec, truth_edges = 0))]
    fn threshold(&self, spec: &str, truth_edges: usize) -> PyResult<PyGraph> {
        let spec: ThresholdSpec = spec.parse().map_err(py_err)?;
        let inner = spec.apply(&self.inner, truth_edges).map_err(py_err)?;
        Ok(PyGraph { inner })
    }

    fn __repr__(&self) -> String {
        format!("Reconstruction(method={:?}, n={})", self.inner.method, self.inner.n())
    }
}

/// Build a graph with one of the generators `er`, `ba` or `ring`.
#[pyfunction]
#[pyo3(signature = (model, nodes, params = None, seed = 0))]
fn generate(model: &str, nodes: usize, params: Option<BTreeMap<String, f64>>, seed: u64) -> PyResult<PyGraph> {
    let inner = pipeline::generate(model, nodes, &params.unwrap_or_default(), seed).map_err(py_err)?;
    Ok(PyGraph { inner })
}

/// Run a dynamics model on `graph`; returns an `n x steps` list of rows.
#[pyfunction]
#[pyo3(signature = (graph, model, steps, seed = 0, params = None))]
fn simulate(
    graph: &PyGraph,
    model: &str,
    steps: usize,
    seed: u64,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<Vec<Vec<f64>>> {
    let model: DynamicsModel = model.parse().map_err(py_err)?;
    let config = params
        .unwrap_or_default()
        .iter()
        .fold(DynamicsConfig::new(steps, seed), |c, (k, &v)| c.with(k, v));
    let ts = model.simulate(&graph.inner, &config).map_err(py_err)?;
    Ok(to_rows(ts.values()))
}

/// Infer pairwise scores from an `n x L` series with the named method.
#[pyfunction]
#[pyo3(signature = (series, method, params = None))]
fn reconstruct(
    series: Vec<Vec<f64>>,
    method: &str,
    params: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyReconstruction> {
    let ts = TimeSeriesMatrix::new(to_matrix(&series)?).map_err(py_err)?;
    let method = Method::from_name(method, &text_params(params)?).map_err(py_err)?;
    Ok(PyReconstruction { inner: method.run(&ts).map_err(py_err)? })
}

fn distance_config(params: Option<&Bound<'_, PyDict>>) -> PyResult<DistanceConfig> {
    let mut cfg = DistanceConfig::default();
    for (k, v) in text_params(params)? {
        cfg.set(&k, &v).map_err(py_err)?;
    }
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

/// Distance between two graphs under a single named measure.
#[pyfunction]
#[pyo3(signature = (g1, g2, measure, params = None))]
fn distance(g1: &PyGraph, g2: &PyGraph, measure: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<f64> {
    let measure: Measure = measure.parse().map_err(py_err)?;
    let cfg = distance_config(params)?;
    Ok(measure.compute(&g1.inner, &g2.inner, &cfg).map_err(py_err)?.value)
}

/// Every registered measure; failures are reported per entry instead of raised.
#[pyfunction]
#[pyo3(signature = (g1, g2, params = None))]
fn distance_all<'py>(
    py: Python<'py>,
    g1: &PyGraph,
    g2: &PyGraph,
    params: Option<&Bound<'py, PyDict>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = distance_config(params)?;
    core_distance_all(&g1.inner, &g2.inner, &cfg)
        .into_iter()
        .map(|o| {
            let d = PyDict::new(py);
            d.set_item("measure", o.measure)?;
            d.set_item("status", o.status.as_str())?;
            d.set_item("value", o.value)?;
            d.set_item("message", o.message)?;
            Ok(d)
        })
        .collect()
}

/// Confusion counts, precision, recall, F1 and AUC against a ground truth.
#[pyfunction]
#[pyo3(signature = (truth, reconstruction, threshold = "density"))]
fn score<'py>(
    py: Python<'py>,
    truth: &PyGraph,
    reconstruction: &PyReconstruction,
    threshold: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let spec: ThresholdSpec = threshold.parse().map_err(py_err)?;
    let r = score_reconstruction(&truth.inner, &reconstruction.inner, spec).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("tp", r.tp)?;
    d.set_item("fp", r.fp)?;
    d.set_item("fn", r.fn_)?;
    d.set_item("tn", r.tn)?;
    d.set_item("precision", r.precision)?;
    d.set_item("recall", r.recall)?;
    d.set_item("f1", r.f1)?;
    d.set_item("auc", r.auc)?;
    d.set_item("auc_degenerate", r.auc_degenerate)?;
    d.set_item("ties_at_cut", r.ties_at_cut)?;
    Ok(d)
}

/// Run an experiment described by a JSON config; returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (config_json, out_dir = None))]
fn run_pipeline(config_json: &str, out_dir: Option<&str>) -> PyResult<String> {
    let cfg = pipeline::PipelineConfig::from_json(config_json, "<config>").map_err(py_err)?;
    let out = pipeline::run_pipeline(&cfg).map_err(py_err)?;
    if let Some(dir) = out_dir {
        pipeline::write_outputs(&out, std::path::Path::new(dir)).map_err(py_err)?;
    }
    Ok(out.report.to_json())
}

#[pymodule]
fn reconet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReconstruction>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_all, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add("METHODS", ::reconet::reconstruction::METHOD_NAMES.to_vec())?;
    m.add("MEASURES", Measure::ALL.iter().map(|m| m.name()).collect::<Vec<_>>())?;
    Ok(())
}
