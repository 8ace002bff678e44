use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{DynamicsConfig, TimeSeriesMatrix};
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::linalg::symmetric_eigenvalues;
use crate::rng::{self, stream, Rng};

fn start(g: &Graph, config: &DynamicsConfig, known: &[&str], what: &str) -> Result<(DMatrix<f64>, Rng)> {
    g.require_undirected(what)?;
    config.validate(known)?;
    Ok((
        DMatrix::zeros(g.n(), config.steps),
        rng::substream(config.seed, stream::DYNAMICS),
    ))
}

fn finish(values: DMatrix<f64>) -> Result<TimeSeriesMatrix> {
    TimeSeriesMatrix::new(values).map_err(|e| Error::NumericalFailure(format!("simulation diverged: {e}")))
}

fn random_spins(rng: &mut Rng, n: usize, p_up: f64) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(p_up) { 1.0 } else { -1.0 }).collect()
}

/// Synchronous Glauber dynamics of an Ising model.
///
/// Parameters: `beta` (inverse temperature, default 0.4), `coupling`
/// (default 1), `p_up` (probability an initial spin is +1, default 0.5).
/// Node `i` flips with probability `1 / (1 + exp(2 beta s_i h_i))` where
/// `h_i = coupling * sum_j w_ij s_j`.
pub fn simulate_ising_glauber(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(g, config, &["beta", "coupling", "p_up"], "ising_glauber")?;
    let beta = config.get("beta", 0.4);
    if beta < 0.0 {
        return Err(Error::param(format!("beta must be non-negative, got {beta}")));
    }
    let coupling = config.get("coupling", 1.0);
    let p_up = config.probability("p_up", 0.5)?;
    let n = g.n();
    let w = g.weights();

    let mut s = random_spins(&mut rng, n, p_up);
    out.column_mut(0).copy_from_slice(&s);
    for t in 1..config.steps {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let h = coupling * (0..n).map(|j| w[(i, j)] * s[j]).sum::<f64>();
                let p_flip = 1.0 / (1.0 + (2.0 * beta * s[i] * h).exp());
                if rng.random::<f64>() < p_flip {
                    -s[i]
                } else {
                    s[i]
                }
            })
            .collect();
        s = next;
        out.column_mut(t).copy_from_slice(&s);
    }
    finish(out)
}

/// Discrete-time SIS epidemic.
///
/// Parameters: `beta_inf` (per-contact infection probability, default 0.2),
/// `mu` (recovery probability, default 0.1), `init_frac` (fraction of nodes
/// infected at t = 0, default 0.1).
pub fn simulate_sis(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(g, config, &["beta_inf", "mu", "init_frac"], "sis")?;
    let beta = config.probability("beta_inf", 0.2)?;
    let mu = config.probability("mu", 0.1)?;
    let init_frac = config.probability("init_frac", 0.1)?;
    let n = g.n();
    let adj = g.adjacency_lists();

    let n_infected = ((init_frac * n as f64).round() as usize).min(n);
    let mut state = vec![0.0; n];
    for i in index::sample(&mut rng, n, n_infected) {
        state[i] = 1.0;
    }
    out.column_mut(0).copy_from_slice(&state);
    for t in 1..config.steps {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let u: f64 = rng.random();
                if state[i] == 1.0 {
                    if u < mu {
                        0.0
                    } else {
                        1.0
                    }
                } else {
                    let k = adj[i].iter().filter(|&&j| state[j] == 1.0).count();
                    let p_inf = 1.0 - (1.0 - beta).powi(k as i32);
                    if k > 0 && u < p_inf {
                        1.0
                    } else {
                        0.0
                    }
                }
            })
            .collect();
        state = next;
        out.column_mut(t).copy_from_slice(&state);
    }
    finish(out)
}

/// Synchronous voter model; `p_up` sets the initial +1 probability (default 0.5).
pub fn simulate_voter(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(g, config, &["p_up"], "voter")?;
    let p_up = config.probability("p_up", 0.5)?;
    let n = g.n();
    let adj = g.adjacency_lists();

    let mut s = random_spins(&mut rng, n, p_up);
    out.column_mut(0).copy_from_slice(&s);
    for t in 1..config.steps {
        let next: Vec<f64> = (0..n)
            .map(|i| match adj[i].len() {
                0 => s[i],
                k => s[adj[i][rng.random_range(0..k)]],
            })
            .collect();
        s = next;
        out.column_mut(t).copy_from_slice(&s);
    }
    finish(out)
}

/// Single random walker; the row of the occupied node is 1, all others 0.
///
/// On a disconnected graph the walker stays in its starting component.
pub fn simulate_random_walker(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(g, config, &[], "random_walker")?;
    let adj = g.adjacency_lists();
    let mut pos = rng.random_range(0..g.n());
    out[(pos, 0)] = 1.0;
    for t in 1..config.steps {
        let k = adj[pos].len();
        if k > 0 {
            pos = adj[pos][rng.random_range(0..k)];
        }
        out[(pos, t)] = 1.0;
    }
    finish(out)
}

pub(crate) fn wrap_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Kuramoto oscillators integrated with explicit Euler; rows hold raw phases.
///
/// Parameters: `coupling` (default 1), `dt` (default 0.01), `omega_spread`
/// (natural frequencies uniform on `[-spread, spread]`, default 1),
/// `phase_spread` (initial phases uniform on `[0, phase_spread)`, default 2π).
pub fn simulate_kuramoto(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(
        g,
        config,
        &["coupling", "dt", "omega_spread", "phase_spread"],
        "kuramoto",
    )?;
    let coupling = config.get("coupling", 1.0);
    let dt = config.get("dt", 0.01);
    if dt <= 0.0 {
        return Err(Error::param(format!("dt must be positive, got {dt}")));
    }
    let spread = config.get("omega_spread", 1.0).abs();
    let phase_spread = config.get("phase_spread", TAU);
    if !(0.0..=TAU).contains(&phase_spread) {
        return Err(Error::param(format!("phase_spread must lie in [0, 2π], got {phase_spread}")));
    }
    let n = g.n();
    let w = g.weights();

    let mut theta: Vec<f64> = (0..n).map(|_| wrap_phase(rng.random::<f64>() * phase_spread)).collect();
    let omega: Vec<f64> = (0..n).map(|_| spread * (2.0 * rng.random::<f64>() - 1.0)).collect();
    out.column_mut(0).copy_from_slice(&theta);
    for t in 1..config.steps {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let pull: f64 = (0..n)
                    .filter(|&j| w[(i, j)] != 0.0)
                    .map(|j| w[(i, j)] * (theta[j] - theta[i]).sin())
                    .sum();
                wrap_phase(theta[i] + dt * (omega[i] + coupling * pull))
            })
            .collect();
        theta = next;
        out.column_mut(t).copy_from_slice(&theta);
    }
    finish(out)
}

/// Noisy linear diffusion `x(t+1) = (I - eps L) x(t) + noise`.
///
/// Parameters: `eps` (default `1 / (2 d_max)`), `noise_sigma` (default 0.1),
/// `init_mean` / `init_sigma` (initial state is i.i.d. normal, default
/// standard normal). Rejects `eps * λ_max(L) >= 2`.
pub fn simulate_diffusion(g: &Graph, config: &DynamicsConfig) -> Result<TimeSeriesMatrix> {
    let (mut out, mut rng) = start(
        g,
        config,
        &["eps", "noise_sigma", "init_mean", "init_sigma"],
        "diffusion",
    )?;
    let lap = laplacian(g)?;
    let d_max = g.max_degree();
    let eps = config.get("eps", if d_max > 0.0 { 0.5 / d_max } else { 0.5 });
    let sigma = config.get("noise_sigma", 0.1);
    let init_mean = config.get("init_mean", 0.0);
    let init_sigma = config.get("init_sigma", 1.0);
    if sigma < 0.0 || init_sigma < 0.0 {
        return Err(Error::param("noise and initial standard deviations must be non-negative"));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::param(format!("eps must be non-negative, got {eps}")));
    }
    // λ_max(L) <= 2 d_max, so the exact spectrum is only needed near the edge
    if eps * 2.0 * d_max >= 2.0 {
        let lambda_max = symmetric_eigenvalues(&lap)?.max();
        if eps * lambda_max >= 2.0 {
            return Err(Error::param(format!(
                "eps = {eps} is unstable for λ_max(L) = {lambda_max}"
            )));
        }
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let n = g.n();
    let propagator = DMatrix::<f64>::identity(n, n) - &lap * eps;

    let mut x = DVector::from_iterator(
        n,
        (0..n).map(|_| init_mean + init_sigma * rng.sample::<f64, _>(StandardNormal)),
    );
    out.set_column(0, &x);
    for t in 1..config.steps {
        let mut next = &propagator * &x;
        if sigma > 0.0 {
            for v in next.iter_mut() {
                *v += noise.sample(&mut rng);
            }
        }
        x = next;
        out.set_column(t, &x);
    }
    finish(out)
}
