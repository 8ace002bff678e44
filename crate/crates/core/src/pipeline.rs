//! The end-to-end experiment: generate or load a graph, simulate dynamics on
//! it, run each configured reconstructor, and score every result.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{DynamicsConfig, DynamicsModel, TimeSeriesMatrix};
use crate::error::{Error, Result};
use crate::evaluation::{score_reconstruction, EdgeScoreReport};
use crate::graph::{generate_ba, generate_er, generate_ring, Graph};
use crate::io::{read_edgelist, write_edgelist, write_matrix_csv};
use crate::reconstruction::{Method, ThresholdSpec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "RECONET_THREADS";
pub const GENERATOR_NAMES: [&str; 3] = ["er", "ba", "ring"];

/// JSON Schema of `report.json`.
pub const REPORT_SCHEMA: &str = include_str!("../schemas/report.schema.json");

/// Build a graph with one of the named generators.
///
/// `er` takes `p`, `ba` takes `m`, `ring` takes `k`; the seed is ignored by
/// the deterministic ring lattice.
pub fn generate(model: &str, nodes: usize, params: &BTreeMap<String, f64>, seed: u64) -> Result<Graph> {
    let accepted: &[&str] = match model {
        "er" => &["p"],
        "ba" => &["m"],
        "ring" => &["k"],
        other => {
            return Err(Error::UnknownName {
                kind: "generator",
                name: other.to_string(),
                valid: GENERATOR_NAMES.to_vec(),
            })
        }
    };
    if let Some(k) = params.keys().find(|k| !accepted.contains(&k.as_str())) {
        return Err(Error::param(format!("generator `{model}` does not accept parameter `{k}`")));
    }
    let count = |key: &str, default: usize| -> Result<usize> {
        match params.get(key) {
            None => Ok(default),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(v) => Err(Error::param(format!("`{key}` must be a non-negative integer, got {v}"))),
        }
    };
    match model {
        "er" => generate_er(nodes, params.get("p").copied().unwrap_or(0.1), seed),
        "ba" => generate_ba(nodes, count("m", 2)?, seed),
        _ => generate_ring(nodes, count("k", 4)?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub generator: String,
    pub nodes: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub file: PathBuf,
}

/// Either `{"generator", "nodes", "params"}` or `{"file"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Generator(GeneratorSpec),
    File(GraphFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocess {
    #[default]
    None,
    Sin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    pub model: String,
    pub steps: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub preprocess: Preprocess,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructorSpec {
    pub method: String,
    /// Numbers, strings or booleans; passed to the method as text.
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl ReconstructorSpec {
    pub fn text_params(&self) -> Result<BTreeMap<String, String>> {
        self.params
            .iter()
            .map(|(k, v)| {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    Value::Bool(b) => b.to_string(),
                    other => return Err(Error::param(format!("parameter `{k}` has unsupported value {other}"))),
                };
                Ok((k.clone(), text))
            })
            .collect()
    }

    pub fn method(&self) -> Result<Method> {
        Method::from_name(&self.method, &self.text_params()?)
    }
}

fn default_threshold() -> String {
    "density".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub graph: GraphSource,
    pub dynamics: DynamicsSpec,
    pub reconstructors: Vec<ReconstructorSpec>,
    /// `quantile:q`, `abs:tau`, `degree:k` or `density`.
    #[serde(default = "default_threshold")]
    pub threshold: String,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn from_json(text: &str, source: &str) -> Result<Self> {
        let cfg: PipelineConfig = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("{source}:{}:{}", e.line(), e.column()), e.to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text, &path.display().to_string())?;
        // relative graph files resolve against the config's directory
        if let GraphSource::File(GraphFile { file }) = &mut cfg.graph {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    /// Check every name against its registry before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let GraphSource::Generator(GeneratorSpec { generator, .. }) = &self.graph {
            if !GENERATOR_NAMES.contains(&generator.as_str()) {
                return Err(Error::UnknownName {
                    kind: "generator",
                    name: generator.clone(),
                    valid: GENERATOR_NAMES.to_vec(),
                });
            }
        }
        self.dynamics.model.parse::<DynamicsModel>()?;
        if self.dynamics.steps < 2 {
            return Err(Error::param("dynamics.steps must be at least 2"));
        }
        if self.reconstructors.is_empty() {
            return Err(Error::param("at least one reconstructor is required"));
        }
        for r in &self.reconstructors {
            r.method()?;
        }
        self.threshold_spec()?;
        Ok(())
    }

    pub fn threshold_spec(&self) -> Result<ThresholdSpec> {
        self.threshold.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub tool_version: String,
    pub seed: u64,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthSummary {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub method: String,
    pub params: BTreeMap<String, f64>,
    pub converged: bool,
    pub scores: EdgeScoreReport,
    pub weights_file: String,
    pub graph_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentReport {
    pub environment: Environment,
    pub ground_truth: GroundTruthSummary,
    pub dynamics: String,
    pub threshold: String,
    pub entries: Vec<MethodEntry>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }
}

/// Everything a pipeline run produces, before anything is written.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub truth: Graph,
    pub series: TimeSeriesMatrix,
    pub weights: Vec<nalgebra::DMatrix<f64>>,
    pub graphs: Vec<Graph>,
    pub report: ExperimentReport,
}

pub const GROUND_TRUTH_FILE: &str = "ground_truth.edges";
pub const SERIES_FILE: &str = "timeseries.csv";
pub const REPORT_FILE: &str = "report.json";

fn file_stem(index: usize, method: &str) -> String {
    format!("{index:02}_{method}")
}

/// Run the experiment in memory. Methods run in parallel; results are
/// independent of the thread count.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let truth = match &cfg.graph {
        GraphSource::Generator(g) => generate(&g.generator, g.nodes, &g.params, cfg.seed)?,
        GraphSource::File(f) => read_edgelist(&f.file)?,
    };
    let model: DynamicsModel = cfg.dynamics.model.parse()?;
    let dyn_cfg = DynamicsConfig {
        steps: cfg.dynamics.steps,
        seed: cfg.seed,
        params: cfg.dynamics.params.clone(),
    };
    let mut series = model.simulate(&truth, &dyn_cfg)?;
    if cfg.dynamics.preprocess == Preprocess::Sin {
        series = series.map_sin();
    }
    let spec = cfg.threshold_spec()?;
    let methods: Vec<Method> = cfg.reconstructors.iter().map(|r| r.method()).collect::<Result<_>>()?;

    let results: Vec<(MethodEntry, nalgebra::DMatrix<f64>, Graph)> = methods
        .par_iter()
        .enumerate()
        .map(|(idx, method)| {
            let r = method.run(&series)?;
            let scores = score_reconstruction(&truth, &r, spec)?;
            let sym = if r.directed { r.symmetrized() } else { r.clone() };
            let graph = spec.apply(&sym, truth.edge_count())?;
            let stem = file_stem(idx, method.name());
            let entry = MethodEntry {
                method: method.name().to_string(),
                params: r.params.clone(),
                converged: r.converged(),
                scores,
                weights_file: format!("{stem}_W.csv"),
                graph_file: format!("{stem}_graph.edges"),
            };
            Ok((entry, r.weights, graph))
        })
        .collect::<Result<_>>()?;

    let mut entries = Vec::with_capacity(results.len());
    let mut weights = Vec::with_capacity(results.len());
    let mut graphs = Vec::with_capacity(results.len());
    for (e, w, g) in results {
        entries.push(e);
        weights.push(w);
        graphs.push(g);
    }
    let report = ExperimentReport {
        environment: Environment {
            tool_version: TOOL_VERSION.to_string(),
            seed: cfg.seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        },
        ground_truth: GroundTruthSummary {
            nodes: truth.n(),
            edges: truth.edge_count(),
        },
        dynamics: model.name().to_string(),
        threshold: spec.to_string(),
        entries,
    };
    Ok(PipelineOutput {
        truth,
        series,
        weights,
        graphs,
        report,
    })
}

/// Write every artefact of a run into `dir`, creating it if needed.
pub fn write_outputs(out: &PipelineOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_edgelist(&out.truth, dir.join(GROUND_TRUTH_FILE))?;
    write_matrix_csv(out.series.values(), dir.join(SERIES_FILE))?;
    for ((entry, w), g) in out.report.entries.iter().zip(&out.weights).zip(&out.graphs) {
        write_matrix_csv(w, dir.join(&entry.weights_file))?;
        write_edgelist(g, dir.join(&entry.graph_file))?;
    }
    let path = dir.join(REPORT_FILE);
    fs::write(&path, out.report.to_json()).map_err(|e| Error::io(&path, e))
}

/// Worker pool honouring `RECONET_THREADS` (unset means rayon's default).
pub fn thread_pool_from_env() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Err(_) => 0,
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(Error::param(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
}
