use super::{check_pair, DistanceValue, Measure};
use crate::error::Result;
use crate::graph::Graph;

/// Fraction of ordered node pairs whose adjacency differs.
pub fn dist_hamming(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, true)?;
    let n = g1.n();
    let diff = (&g1.adjacency() - &g2.adjacency()).abs().sum();
    let value = if n > 1 { diff / (n * (n - 1)) as f64 } else { 0.0 };
    DistanceValue::new(Measure::Hamming, value)
}

/// `1 - |E1 ∩ E2| / |E1 ∪ E2|`; zero when both edge sets are empty.
pub fn dist_jaccard(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, true)?;
    let n = g1.n();
    let (mut both, mut either) = (0usize, 0usize);
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (g1.has_edge(i, j), g2.has_edge(i, j));
            both += usize::from(a && b);
            either += usize::from(a || b);
        }
    }
    let value = if either == 0 {
        0.0
    } else {
        1.0 - both as f64 / either as f64
    };
    DistanceValue::new(Measure::Jaccard, value)
}

/// Frobenius norm of the difference of the weight matrices.
pub fn dist_frobenius(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, true)?;
    DistanceValue::new(Measure::Frobenius, (g1.weights() - g2.weights()).norm())
}

fn degree_distribution(g: &Graph, support: usize) -> Vec<f64> {
    let mut p = vec![0.0; support];
    for d in g.degrees().iter() {
        p[*d as usize] += 1.0;
    }
    let n = g.n() as f64;
    p.iter_mut().for_each(|x| *x /= n);
    p
}

fn kl_to_mixture(p: &[f64], m: &[f64]) -> f64 {
    p.iter()
        .zip(m)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &mi)| pi * (pi / mi).log2())
        .sum()
}

/// Jensen–Shannon divergence (bits) between the degree distributions.
pub fn dist_degree_jsd(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, false)?;
    let support = 1 + g1.max_degree().max(g2.max_degree()) as usize;
    let p = degree_distribution(g1, support);
    let q = degree_distribution(g2, support);
    let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
    // evaluate in a fixed argument order so d(a, b) == d(b, a) bit for bit
    let (first, second) = if p <= q { (&p, &q) } else { (&q, &p) };
    let jsd = 0.5 * kl_to_mixture(first, &m) + 0.5 * kl_to_mixture(second, &m);
    DistanceValue::new(Measure::DegreeJsd, jsd.clamp(0.0, 1.0))
}
