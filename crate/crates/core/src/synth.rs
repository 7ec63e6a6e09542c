//! Seeded graph generators: linear preferential attachment and G(n, p).
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! fixes the output graph byte for byte across platforms and releases of
//! this crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaParams {
    /// Final node count.
    pub n: usize,
    /// Edges attached by every new node.
    pub m: usize,
    pub seed: u64,
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        if self.n < self.m {
            return Err(Error::Parameter(format!(
                "n ({}) must be at least m ({})",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// `m(m-1)/2` seed edges plus `m` per growth step.
    pub fn expected_edges(&self) -> usize {
        self.m * (self.m - 1) / 2 + self.m * (self.n - self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Parameter(format!(
                "p must lie in [0, 1] (got {})",
                self.p
            )));
        }
        Ok(())
    }
}

/// Attachment probability of each node under linear preferential
/// attachment: `k_i / sum_j k_j`.
pub fn attachment_probabilities(degrees: &[usize]) -> Result<Vec<f64>> {
    let total: usize = degrees.iter().sum();
    if total == 0 {
        return Err(Error::Degenerate(
            "attachment needs at least one node with positive degree".into(),
        ));
    }
    let total = total as f64;
    Ok(degrees.iter().map(|&k| k as f64 / total).collect())
}

/// Roulette wheel over edge endpoints.
///
/// A node appears once per incident edge, so a uniform draw from the
/// endpoint list picks node `i` with probability `k_i / sum_j k_j`.
#[derive(Debug, Clone)]
pub struct PreferentialSampler {
    endpoints: Vec<NodeId>,
    node_count: usize,
}

impl PreferentialSampler {
    pub fn new() -> Self {
        Self {
            endpoints: Vec::new(),
            node_count: 0,
        }
    }

    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut endpoints = Vec::with_capacity(degrees.iter().sum());
        for (node, &k) in degrees.iter().enumerate() {
            endpoints.extend(std::iter::repeat_n(node, k));
        }
        Self {
            endpoints,
            node_count: degrees.len(),
        }
    }

    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) {
        self.endpoints.push(a);
        self.endpoints.push(b);
    }

    /// One draw proportional to degree. With no edges yet, falls back to a
    /// uniform draw over existing nodes.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> NodeId {
        if self.endpoints.is_empty() {
            assert!(self.node_count > 0, "cannot sample from an empty sampler");
            rng.gen_range(0..self.node_count)
        } else {
            self.endpoints[rng.gen_range(0..self.endpoints.len())]
        }
    }

    /// `count` distinct nodes, redrawing on duplicates.
    pub fn sample_distinct<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<NodeId> {
        let mut picked = Vec::with_capacity(count);
        while picked.len() < count {
            let v = self.sample(rng);
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        picked
    }
}

impl Default for PreferentialSampler {
    fn default() -> Self {
        Self::new()
    }
}

/// Barabási–Albert growth from a complete seed graph on `m` nodes.
///
/// Each new node links to `m` distinct existing nodes chosen with
/// probability proportional to their current total degree. Arcs point from
/// the newer node to the older one and the graph is marked undirected.
pub fn generate_ba(params: BaParams) -> Result<Graph> {
    params.validate()?;
    let BaParams { n, m, seed } = params;
    let mut rng = rng_from_seed(seed);
    let mut sampler = PreferentialSampler::new();
    let mut edges = Vec::with_capacity(params.expected_edges());

    for i in 0..m {
        sampler.add_node();
        for j in 0..i {
            edges.push((i, j));
            sampler.add_edge(i, j);
        }
    }
    for _ in m..n {
        let targets = sampler.sample_distinct(m, &mut rng);
        let v = sampler.add_node();
        for t in targets {
            edges.push((v, t));
            sampler.add_edge(v, t);
        }
    }
    Ok(Graph::from_id_edges(n, edges, false))
}

/// G(n, p): every unordered pair is an edge independently with probability
/// `p`. Uses geometric skips between successive edges so the cost is
/// proportional to the number of edges rather than pairs.
pub fn generate_er(params: ErParams) -> Result<Graph> {
    params.validate()?;
    let ErParams { n, p, seed } = params;
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v, w));
            }
        }
    } else if p > 0.0 && n > 1 {
        let mut rng = rng_from_seed(seed);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + skip.min(i64::MAX as f64 / 2.0) as i64;
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    Ok(Graph::from_id_edges(n, edges, false))
}
