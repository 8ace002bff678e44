use super::{check_pair, DistanceValue, Measure};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-node features, in signature order.
pub const NETSIMILE_FEATURES: [&str; 7] = [
    "degree",
    "clustering",
    "mean_neighbor_degree",
    "mean_neighbor_clustering",
    "ego_internal_edges",
    "ego_outgoing_edges",
    "ego_outside_neighbors",
];

/// Aggregates applied to each feature column, in signature order.
pub const NETSIMILE_AGGREGATES: [&str; 5] = ["mean", "median", "std", "skewness", "kurtosis"];

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn node_features(g: &Graph) -> Vec<[f64; 7]> {
    let n = g.n();
    let adj = g.adjacency_lists();
    let mut in_ego = vec![false; n];
    let deg: Vec<f64> = adj.iter().map(|a| a.len() as f64).collect();
    let links_among = |nodes: &[usize]| -> usize {
        let mut count = 0;
        for (k, &u) in nodes.iter().enumerate() {
            for &v in &nodes[k + 1..] {
                count += usize::from(g.has_edge(u, v));
            }
        }
        count
    };
    let clustering: Vec<f64> = (0..n)
        .map(|i| {
            let d = deg[i];
            ratio(links_among(&adj[i]) as f64, d * (d - 1.0) / 2.0)
        })
        .collect();

    (0..n)
        .map(|i| {
            let nbrs = &adj[i];
            let k = nbrs.len() as f64;
            let mean_nd = ratio(nbrs.iter().map(|&v| deg[v]).sum(), k);
            let mean_nc = ratio(nbrs.iter().map(|&v| clustering[v]).sum(), k);

            in_ego[i] = true;
            nbrs.iter().for_each(|&v| in_ego[v] = true);
            let internal = deg[i] + links_among(nbrs) as f64;
            let ego_degree: f64 = deg[i] + nbrs.iter().map(|&v| deg[v]).sum::<f64>();
            let outgoing = ego_degree - 2.0 * internal;
            let mut outside: Vec<usize> = std::iter::once(i)
                .chain(nbrs.iter().copied())
                .flat_map(|u| adj[u].iter().copied())
                .filter(|&w| !in_ego[w])
                .collect();
            outside.sort_unstable();
            outside.dedup();
            in_ego[i] = false;
            nbrs.iter().for_each(|&v| in_ego[v] = false);

            [deg[i], clustering[i], mean_nd, mean_nc, internal, outgoing, outside.len() as f64]
        })
        .collect()
}

fn aggregates(values: &mut [f64]) -> [f64; 5] {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let moment = |k: i32| values.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / m;
    let (m2, m3, m4) = (moment(2), moment(3), moment(4));
    values.sort_by(f64::total_cmp);
    let len = values.len();
    let median = if len % 2 == 1 {
        values[len / 2]
    } else {
        0.5 * (values[len / 2 - 1] + values[len / 2])
    };
    [mean, median, m2.sqrt(), ratio(m3, m2.powf(1.5)), ratio(m4, m2 * m2) - 3.0]
}

/// 35-entry signature: for each feature, its five aggregates over all nodes.
pub fn netsimile_signature(g: &Graph) -> Result<Vec<f64>> {
    g.require_undirected("NetSimile")?;
    if g.n() == 0 {
        return Err(Error::UnsupportedInput("NetSimile needs at least one node".into()));
    }
    let features = node_features(g);
    let mut signature = Vec::with_capacity(35);
    for f in 0..NETSIMILE_FEATURES.len() {
        let mut column: Vec<f64> = features.iter().map(|row| row[f]).collect();
        signature.extend(aggregates(&mut column));
    }
    Ok(signature)
}

/// Canberra distance between NetSimile signatures.
pub fn dist_netsimile(g1: &Graph, g2: &Graph) -> Result<DistanceValue> {
    check_pair(g1, g2, false)?;
    let s1 = netsimile_signature(g1)?;
    let s2 = netsimile_signature(g2)?;
    let value = s1
        .iter()
        .zip(&s2)
        .map(|(x, y)| ratio((x - y).abs(), x.abs() + y.abs()))
        .sum();
    DistanceValue::new(Measure::NetSimile, value)
}
