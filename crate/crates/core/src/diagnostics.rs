//! Structural diagnostics on the undirected view of a graph: sampled
//! average shortest-path length and giant-component robustness under node
//! removal.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{giant_component_size_among, Adjacency, DegreeMode, Graph, NodeId};
use crate::synth::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLengthEstimate {
    pub sample_sources: usize,
    /// Mean hop distance over reachable (source, target) pairs.
    pub mean_distance: f64,
    pub reachable_pairs: u64,
    /// Pairs with no connecting path; excluded from the mean.
    pub unreachable_pairs: u64,
}

/// Mean BFS distance from `sources` uniformly sampled nodes (all nodes when
/// `sources >= node_count`). BFS trees run in parallel and are reduced in
/// ascending source order.
pub fn avg_path_length_sampled(g: &Graph, sources: usize, seed: u64) -> Result<PathLengthEstimate> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Parameter("graph has no nodes".into()));
    }
    if sources == 0 {
        return Err(Error::Parameter("need at least one source".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::NoReachablePairs);
    }
    let mut picked: Vec<NodeId> = if sources >= n {
        (0..n).collect()
    } else {
        let mut rng = rng_from_seed(seed);
        index::sample(&mut rng, n, sources).into_vec()
    };
    picked.sort_unstable();

    let view = g.undirected_view();
    let per_source: Vec<(u64, u64)> = picked.par_iter().map(|&s| distance_sum(&view, s)).collect();
    let (mut total, mut reached) = (0u64, 0u64);
    for (sum, count) in per_source {
        total += sum;
        reached += count;
    }
    if reached == 0 {
        return Err(Error::NoReachablePairs);
    }
    let pairs = picked.len() as u64 * (n as u64 - 1);
    Ok(PathLengthEstimate {
        sample_sources: picked.len(),
        mean_distance: total as f64 / reached as f64,
        reachable_pairs: reached,
        unreachable_pairs: pairs - reached,
    })
}

/// (sum of distances, number of reached nodes) excluding the source.
fn distance_sum(view: &Adjacency, source: NodeId) -> (u64, u64) {
    let mut dist = vec![u32::MAX; view.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    let (mut sum, mut count) = (0u64, 0u64);
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        for &u in view.neighbors(v) {
            if dist[u] == u32::MAX {
                dist[u] = next;
                sum += next as u64;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    (sum, count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalStrategy {
    Random,
    /// Highest total degree first, ties broken by lower dense id. Degrees
    /// are taken once, before any removal.
    Targeted,
}

impl FromStr for RemovalStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(RemovalStrategy::Random),
            "targeted" => Ok(RemovalStrategy::Targeted),
            other => Err(Error::Parameter(format!(
                "strategy must be random or targeted (got `{other}`)"
            ))),
        }
    }
}

impl fmt::Display for RemovalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemovalStrategy::Random => "random",
            RemovalStrategy::Targeted => "targeted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub strategy: RemovalStrategy,
    pub fraction_removed: f64,
    pub nodes_removed: usize,
    pub trials: usize,
    pub giant_fraction_mean: f64,
    pub giant_fraction_per_trial: Vec<f64>,
}

/// Number of nodes a removal fraction maps to, `ceil(fraction * n)`.
pub fn removal_count(fraction: f64, n: usize) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Parameter(format!(
            "removal fraction must lie in (0, 1] (got {fraction})"
        )));
    }
    let exact = fraction * n as f64;
    // absorb representation error such as 0.05 * 5000 = 250.00000000000003
    let count = if (exact - exact.round()).abs() < 1e-9 {
        exact.round()
    } else {
        exact.ceil()
    } as usize;
    if count == 0 {
        return Err(Error::Parameter(format!(
            "fraction {fraction} of {n} nodes removes nothing"
        )));
    }
    Ok(count)
}

/// Removes `ceil(fraction * n)` nodes and measures the surviving giant
/// component as a share of the original node count.
///
/// Random removal draws a fresh uniform node sample per trial; targeted
/// removal is deterministic, so every trial reports the same value.
pub fn removal_experiment(
    g: &Graph,
    fraction: f64,
    strategy: RemovalStrategy,
    trials: usize,
    seed: u64,
) -> Result<RobustnessReport> {
    let n = g.node_count();
    let k = removal_count(fraction, n)?;
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let giant_fraction = |removed: &[bool]| giant_component_size_among(g, |v| !removed[v]) as f64 / n as f64;

    let per_trial = match strategy {
        RemovalStrategy::Targeted => {
            let degrees = g.degree_sequence(DegreeMode::Total);
            let mut order: Vec<NodeId> = (0..n).collect();
            order.sort_by_key(|&v| (std::cmp::Reverse(degrees.degrees()[v]), v));
            let mut removed = vec![false; n];
            for &v in &order[..k] {
                removed[v] = true;
            }
            vec![giant_fraction(&removed); trials]
        }
        RemovalStrategy::Random => {
            let mut rng = rng_from_seed(seed);
            (0..trials)
                .map(|_| {
                    let mut removed = vec![false; n];
                    for v in index::sample(&mut rng, n, k) {
                        removed[v] = true;
                    }
                    giant_fraction(&removed)
                })
                .collect()
        }
    };
    let mean = per_trial.iter().sum::<f64>() / trials as f64;
    Ok(RobustnessReport {
        strategy,
        fraction_removed: fraction,
        nodes_removed: k,
        trials,
        giant_fraction_mean: mean,
        giant_fraction_per_trial: per_trial,
    })
}
