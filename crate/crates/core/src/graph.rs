//! Dense graph model and random-graph generators.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{self, stream};

/// A simple graph on nodes `0..n` backed by a dense weight matrix.
///
/// `weights[(i, j)]` is the weight of edge `i -> j`; zero means no edge.
/// The diagonal is always zero and undirected graphs are exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    weights: DMatrix<f64>,
}

impl Graph {
    pub fn new(weights: DMatrix<f64>, directed: bool) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 || !weights.is_square() {
            return Err(Error::Input(format!(
                "weight matrix must be square with at least one node, got {}x{}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Input(format!("non-finite edge weight {bad}")));
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::Input(format!("self-loop on node {i}")));
            }
            if !directed {
                for j in (i + 1)..n {
                    if weights[(i, j)] != weights[(j, i)] {
                        return Err(Error::Input(format!(
                            "undirected weights are not symmetric at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(Graph { directed, weights })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "graph needs at least one node");
        Graph {
            directed: false,
            weights: DMatrix::zeros(n, n),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g.weights[(i, j)] = 1.0;
                }
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    /// Undirected unit-weight graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop on node {u}")));
            }
            g.weights[(u, v)] = 1.0;
            g.weights[(v, u)] = 1.0;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn into_weights(self) -> DMatrix<f64> {
        self.weights
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weights[(i, j)] != 0.0
    }

    /// 0/1 adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<f64> {
        self.weights.map(|w| if w != 0.0 { 1.0 } else { 0.0 })
    }

    /// Edges as `(i, j, w)`; undirected edges are listed once with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            let start = if self.directed { 0 } else { i + 1 };
            for j in start..n {
                let w = self.weights[(i, j)];
                if i != j && w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Out-neighbors of `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.has_edge(i, j)).collect()
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|i| self.neighbors(i)).collect()
    }

    /// Binarized row sums (out-degree for directed graphs).
    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.n(),
            (0..self.n()).map(|i| self.weights.row(i).iter().filter(|&&w| w != 0.0).count() as f64),
        )
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees().iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && (self.has_edge(u, v) || self.has_edge(v, u)) {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Relabel nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::param("not a permutation of the node set"));
        }
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                w[(perm[i], perm[j])] = self.weights[(i, j)];
            }
        }
        Ok(Graph {
            directed: self.directed,
            weights: w,
        })
    }

    pub(crate) fn require_undirected(&self, what: &str) -> Result<()> {
        if self.directed {
            Err(Error::UnsupportedInput(format!("{what} requires an undirected graph")))
        } else {
            Ok(())
        }
    }
}

/// Combinatorial Laplacian `D - A` of the binarized adjacency.
pub fn laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    laplacian_of(g, &g.adjacency())
}

/// Laplacian built from the edge weights instead of the 0/1 adjacency.
pub fn weighted_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    laplacian_of(g, g.weights())
}

fn laplacian_of(g: &Graph, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    g.require_undirected("laplacian")?;
    let mut l = -a.clone();
    for i in 0..g.n() {
        l[(i, i)] = a.row(i).sum();
    }
    Ok(l)
}

/// Binarized degree vector.
pub fn degrees(g: &Graph) -> DVector<f64> {
    g.degrees()
}

/// Erdős–Rényi G(n, p).
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng::substream(seed, stream::GENERATOR);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                g.weights[(i, j)] = 1.0;
                g.weights[(j, i)] = 1.0;
            }
        }
    }
    Ok(g)
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a complete graph on `m` nodes; each later node attaches to
/// `m` distinct existing nodes chosen with probability proportional to
/// their degree before the new node arrives. When every candidate has
/// degree zero the choice is uniform.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::param(format!("need 1 <= m < n, got m={m}, n={n}")));
    }
    let mut rng = rng::substream(seed, stream::GENERATOR);
    let mut g = Graph::empty(n);
    for i in 0..m {
        for j in (i + 1)..m {
            g.weights[(i, j)] = 1.0;
            g.weights[(j, i)] = 1.0;
        }
    }
    let mut degree: Vec<f64> = vec![0.0; n];
    for (i, d) in degree.iter_mut().enumerate().take(m) {
        *d = (m - 1) as f64;
        debug_assert_eq!(g.weights.row(i).sum(), *d);
    }
    for v in m..n {
        let mut weight: Vec<f64> = degree[..v].to_vec();
        let mut targets = Vec::with_capacity(m);
        for _ in 0..m {
            let total: f64 = weight.iter().sum();
            let pick = if total > 0.0 {
                let mut r = rng.random::<f64>() * total;
                let mut chosen = None;
                for (u, &w) in weight.iter().enumerate() {
                    if w > 0.0 {
                        chosen = Some(u);
                        if r < w {
                            break;
                        }
                        r -= w;
                    }
                }
                chosen.expect("positive total weight")
            } else {
                let free: Vec<usize> = (0..v).filter(|u| !targets.contains(u)).collect();
                free[rng.random_range(0..free.len())]
            };
            weight[pick] = 0.0;
            targets.push(pick);
        }
        for &u in &targets {
            g.weights[(u, v)] = 1.0;
            g.weights[(v, u)] = 1.0;
            degree[u] += 1.0;
        }
        degree[v] = m as f64;
    }
    Ok(g)
}

/// Ring lattice where node `i` links to `i ± 1, ..., i ± k/2` (mod n).
pub fn generate_ring(n: usize, k: usize) -> Result<Graph> {
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(Error::param(format!("ring needs even k with 2 <= k < n, got k={k}, n={n}")));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for off in 1..=k / 2 {
            let j = (i + off) % n;
            g.weights[(i, j)] = 1.0;
            g.weights[(j, i)] = 1.0;
        }
    }
    Ok(g)
}
