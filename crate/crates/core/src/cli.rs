//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or format error, 3 precondition or
//! parameter violation, 4 numerical failure, 5 unknown method, measure,
//! model or flag. Diagnostics go to stderr; data goes to files or stdout.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::distances::{DistanceConfig, DistanceOutcome, Measure};
use crate::dynamics::{DynamicsConfig, DynamicsModel, TimeSeriesMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{read_edgelist, read_matrix_csv, write_edgelist, write_matrix_csv};
use crate::pipeline::{generate, run_pipeline, thread_pool_from_env, write_outputs, PipelineConfig};
use crate::reconstruction::{Method, ThresholdSpec};

#[derive(Debug, Parser)]
#[command(name = "reconet", version, about = "Simulate network dynamics, reconstruct networks and compare graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Generate {
        #[arg(long)]
        model: String,
        #[arg(long)]
        nodes: usize,
        /// Generator parameter `key=value` (er: p, ba: m, ring: k).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate dynamics on a graph and write the N x L time series.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dynamics: String,
        #[arg(long)]
        steps: usize,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a weight matrix from a time series.
    Reconstruct {
        #[arg(long)]
        ts: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// `quantile:q`, `abs:tau` or `degree:k`.
        #[arg(long, requires = "graph_out")]
        threshold: Option<String>,
        #[arg(long, requires = "threshold")]
        graph_out: Option<PathBuf>,
    },
    /// Distances between two graphs.
    Distance {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        /// Comma-separated measure names, or `all`.
        #[arg(long, default_value = "all")]
        measure: String,
        /// Distance parameter `key=value` (gamma, xi, p, grid_points).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Pairwise distance matrix over every edge-list file in a directory.
    DistanceMatrix {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// File listing the graphs in matrix order (default: `<out>.index`).
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Run a configured simulate-reconstruct-score experiment.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn split_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for p in raw {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::parse("--param", format!("expected KEY=VALUE, got `{p}`")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::param(format!("parameter `{k}` given twice")));
        }
    }
    Ok(out)
}

fn numeric_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    split_params(raw)?
        .into_iter()
        .map(|(k, v)| {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::parse("--param", format!("`{k}` expects a number, got `{v}`")))?;
            Ok((k, x))
        })
        .collect()
}

fn distance_config(raw: &[String]) -> Result<DistanceConfig> {
    let mut cfg = DistanceConfig::default();
    for (k, v) in split_params(raw)? {
        cfg.set(&k, &v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_measures(spec: &str) -> Result<Vec<Measure>> {
    if spec == "all" {
        return Ok(Measure::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse()).collect()
}

fn print_outcomes(outcomes: &[DistanceOutcome], format: Format) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    let text = match format {
        Format::Json => {
            let mut t = serde_json::to_string_pretty(outcomes).expect("outcomes serialise");
            t.push('\n');
            t
        }
        Format::Tsv => {
            let mut t = String::from("measure\tstatus\tvalue\n");
            for o in outcomes {
                let status = serde_json::to_value(o.status).expect("status serialises");
                let value = o.value.map_or_else(|| "NaN".to_string(), |v| v.to_string());
                t.push_str(&format!("{}\t{}\t{}\n", o.measure, status.as_str().unwrap_or("?"), value));
            }
            t
        }
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_distance(g1: &Path, g2: &Path, measure: &str, params: &[String], format: Format) -> Result<()> {
    let measures = parse_measures(measure)?;
    let cfg = distance_config(params)?;
    let a = read_edgelist(g1)?;
    let b = read_edgelist(g2)?;
    let outcomes: Vec<DistanceOutcome> = if measure == "all" {
        crate::distances::distance_all(&a, &b, &cfg)
    } else {
        // an explicitly requested measure that fails is a command failure
        measures
            .iter()
            .map(|&m| m.compute(&a, &b, &cfg).map(|v| DistanceOutcome::from_result(m, Ok(v))))
            .collect::<Result<_>>()?
    };
    print_outcomes(&outcomes, format)
}

fn graph_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(Error::parse(dir.display().to_string(), "directory contains no graph files"));
    }
    Ok(files)
}

fn cmd_distance_matrix(dir: &Path, measure: &str, params: &[String], out: &Path, index: Option<&Path>) -> Result<()> {
    let measure: Measure = measure.parse()?;
    let cfg = distance_config(params)?;
    let files = graph_files(dir)?;
    let graphs: Vec<Graph> = files.iter().map(read_edgelist).collect::<Result<_>>()?;
    let k = graphs.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
    let values: Vec<std::result::Result<f64, Error>> = pairs
        .par_iter()
        .map(|&(i, j)| measure.compute(&graphs[i], &graphs[j], &cfg).map(|v| v.value))
        .collect();
    let name = |i: usize| files[i].file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let mut m = DMatrix::zeros(k, k);
    for (&(i, j), v) in pairs.iter().zip(values) {
        let x = match v {
            Ok(x) => x,
            Err(e) => {
                eprintln!("warning: {measure}({}, {}) failed: {e}", name(i), name(j));
                f64::NAN
            }
        };
        m[(i, j)] = x;
        m[(j, i)] = x;
    }
    write_matrix_csv(&m, out)?;
    let index_path = index.map_or_else(
        || {
            let mut p = out.as_os_str().to_owned();
            p.push(".index");
            PathBuf::from(p)
        },
        Path::to_path_buf,
    );
    let listing: String = (0..k).map(|i| format!("{}\n", name(i))).collect();
    fs::write(&index_path, listing).map_err(|e| Error::io(&index_path, e))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            model,
            nodes,
            params,
            seed,
            out,
        } => write_edgelist(&generate(&model, nodes, &numeric_params(&params)?, seed)?, out),
        Command::Simulate {
            graph,
            dynamics,
            steps,
            params,
            seed,
            out,
        } => {
            let model: DynamicsModel = dynamics.parse()?;
            let g = read_edgelist(graph)?;
            let cfg = DynamicsConfig {
                steps,
                seed,
                params: numeric_params(&params)?,
            };
            write_matrix_csv(model.simulate(&g, &cfg)?.values(), out)
        }
        Command::Reconstruct {
            ts,
            method,
            params,
            out,
            threshold,
            graph_out,
        } => {
            let method = Method::from_name(&method, &split_params(&params)?)?;
            let spec: Option<ThresholdSpec> = threshold.as_deref().map(str::parse).transpose()?;
            if spec == Some(ThresholdSpec::MatchDensity) {
                return Err(Error::param("the density threshold needs a ground truth; use the pipeline"));
            }
            let series = TimeSeriesMatrix::new(read_matrix_csv(ts)?)?;
            let r = method.run(&series)?;
            write_matrix_csv(&r.weights, out)?;
            if let (Some(spec), Some(path)) = (spec, graph_out) {
                write_edgelist(&spec.apply(&r, 0)?, path)?;
            }
            Ok(())
        }
        Command::Distance {
            g1,
            g2,
            measure,
            params,
            format,
        } => cmd_distance(&g1, &g2, &measure, &params, format),
        Command::DistanceMatrix {
            dir,
            measure,
            params,
            out,
            index,
        } => cmd_distance_matrix(&dir, &measure, &params, &out, index.as_deref()),
        Command::Pipeline { config, out_dir } => {
            let cfg = PipelineConfig::load(&config)?;
            let dir = out_dir
                .or_else(|| cfg.out_dir.clone())
                .ok_or_else(|| Error::param("no output directory: pass --out-dir or set out_dir in the config"))?;
            let output = run_pipeline(&cfg)?;
            write_outputs(&output, &dir)
        }
    }
}

fn clap_exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
        ErrorKind::UnknownArgument | ErrorKind::InvalidSubcommand => 5,
        _ => 2,
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = clap_exit_code(e.kind());
            let _ = e.print();
            return code;
        }
    };
    let result = thread_pool_from_env().and_then(|pool| pool.install(|| execute(cli.command)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_splitting() {
        let p = split_params(&["a=1".into(), "b = x".into()]).unwrap();
        assert_eq!(p["b"], "x");
        assert_eq!(split_params(&["oops".into()]).unwrap_err().exit_code(), 2);
        assert_eq!(numeric_params(&["k=abc".into()]).unwrap_err().exit_code(), 2);
        assert_eq!(split_params(&["a=1".into(), "a=2".into()]).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn measure_lists() {
        assert_eq!(parse_measures("all").unwrap().len(), 10);
        assert_eq!(parse_measures("hamming,jaccard").unwrap(), vec![Measure::Hamming, Measure::Jaccard]);
        assert_eq!(parse_measures("hamming,nope").unwrap_err().exit_code(), 5);
    }

    #[test]
    fn clap_errors_have_exit_codes() {
        assert_eq!(run(["reconet", "generate", "--bogus"]), 5);
        assert_eq!(run(["reconet", "frobnicate"]), 5);
        assert_eq!(run(["reconet", "generate", "--model", "er"]), 2);
        assert_eq!(run(["reconet", "generate", "--model", "er", "--nodes", "x", "--out", "o"]), 2);
    }
}
