//! Laplacian-spectrum distances: λ-distance, Ipsen–Mikhailov and HIM.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{OnceLock, RwLock};

use super::{check_pair, dist_hamming, DistanceConfig, DistanceValue, Measure};
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::linalg::symmetric_eigenvalues;

/// Largest share of one Lorentzian's mass allowed past the integration cutoff.
const TAIL_MASS: f64 = 5e-4;
const MIN_PAD: f64 = 3.0;

fn laplacian_spectrum(g: &Graph) -> Result<Vec<f64>> {
    Ok(symmetric_eigenvalues(&laplacian(g)?)?.iter().copied().collect())
}

/// Euclidean distance between descending Laplacian spectra, zero-padded.
pub fn dist_laplacian_spectrum(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, false)?;
    let mut a = laplacian_spectrum(g1)?;
    let mut b = laplacian_spectrum(g2)?;
    a.reverse();
    b.reverse();
    let len = a.len().max(b.len());
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    let sq: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
    DistanceValue::new(Measure::LaplacianSpectrum, sq.sqrt())
}

/// Normalised Lorentzian-broadened density of the vibrational frequencies
/// `ω_i = sqrt(λ_i)` over the `N - 1` largest Laplacian eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    frequencies: Vec<f64>,
    gamma: f64,
    scale: f64,
}

impl SpectralDensity {
    pub fn new(g: &Graph, gamma: f64) -> Result<Self> {
        if g.n() < 2 {
            return Err(Error::UnsupportedInput(
                "Ipsen–Mikhailov needs at least two nodes".into(),
            ));
        }
        let spectrum = laplacian_spectrum(g)?;
        let frequencies: Vec<f64> = spectrum[1..].iter().map(|&l| l.max(0.0).sqrt()).collect();
        // ∫_0^∞ γ / ((ω - ω_i)² + γ²) dω = π/2 + atan(ω_i / γ)
        let mass: f64 = frequencies.iter().map(|&w| FRAC_PI_2 + (w / gamma).atan()).sum();
        Ok(SpectralDensity {
            frequencies,
            gamma,
            scale: 1.0 / mass,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn eval(&self, omega: f64) -> f64 {
        let g2 = self.gamma * self.gamma;
        self.scale
            * self
                .frequencies
                .iter()
                .map(|&w| self.gamma / ((omega - w) * (omega - w) + g2))
                .sum::<f64>()
    }

    /// Integration cutoff for densities whose largest frequency is `max_frequency`.
    ///
    /// Past `w_max + pad` each Lorentzian keeps at most `TAIL_MASS` of its mass.
    pub fn cutoff(max_frequency: f64, gamma: f64) -> f64 {
        let pad = gamma / (FRAC_PI_2 * TAIL_MASS).tan();
        max_frequency + pad.max(MIN_PAD)
    }

    /// `∫_0^upper ρ(ω) dω` by composite Simpson.
    pub fn mass(&self, upper: f64, intervals: usize) -> f64 {
        simpson(|w| self.eval(w), upper, intervals)
    }
}

fn simpson<F: Fn(f64) -> f64>(f: F, upper: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = upper / n as f64;
    let mut acc = f(0.0) + f(upper);
    for k in 1..n {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(k as f64 * h);
    }
    acc * h / 3.0
}

fn im_between(d1: &SpectralDensity, d2: &SpectralDensity, cfg: &DistanceConfig) -> f64 {
    let upper = SpectralDensity::cutoff(d1.max_frequency().max(d2.max_frequency()), cfg.gamma);
    simpson(
        |w| {
            let d = d1.eval(w) - d2.eval(w);
            d * d
        },
        upper,
        cfg.grid_points,
    )
    .max(0.0)
    .sqrt()
}

/// Ipsen–Mikhailov distance between Lorentzian spectral densities.
pub fn dist_ipsen_mikhailov(g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Result<DistanceValue> {
    check_pair(g1, g2, false)?;
    cfg.validate()?;
    let d1 = SpectralDensity::new(g1, cfg.gamma)?;
    let d2 = SpectralDensity::new(g2, cfg.gamma)?;
    DistanceValue::new(Measure::IpsenMikhailov, im_between(&d1, &d2, cfg))
}

type NormKey = (usize, u64, usize);

fn normalizer_cache() -> &'static RwLock<HashMap<NormKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<NormKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// IM distance between the empty and complete graphs on `n` nodes.
fn im_normalizer(n: usize, cfg: &DistanceConfig) -> Result<f64> {
    let key = (n, cfg.gamma.to_bits(), cfg.grid_points);
    if let Some(&v) = normalizer_cache().read().expect("cache lock").get(&key) {
        return Ok(v);
    }
    let v = dist_ipsen_mikhailov(&Graph::empty(n), &Graph::complete(n), cfg)?.value;
    normalizer_cache().write().expect("cache lock").entry(key).or_insert(v);
    Ok(v)
}

/// Hamming–Ipsen–Mikhailov: `sqrt(H² + xi·IMn²) / sqrt(1 + xi)`, with IM
/// normalised by its empty-vs-complete value at the same size.
pub fn dist_him(g1: &Graph, g2: &Graph, cfg: &DistanceConfig) -> Result<DistanceValue> {
    check_pair(g1, g2, true)?;
    cfg.validate()?;
    let h = dist_hamming(g1, g2)?.value;
    let im = dist_ipsen_mikhailov(g1, g2, cfg)?.value;
    let norm = im_normalizer(g1.n(), cfg)?;
    let imn = if norm > 0.0 { im / norm } else { 0.0 };
    let value = ((h * h + cfg.xi * imn * imn) / (1.0 + cfg.xi)).sqrt();
    DistanceValue::new(Measure::Him, value)
}
