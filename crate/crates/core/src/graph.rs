//! Immutable adjacency storage with dense node ids and external labels.
//!
//! Edges are stored as directed arcs in a compressed (CSR) layout. A graph
//! built with `directed = false` still stores one arc per edge, in the
//! orientation it was first seen; the flag only changes how duplicates are
//! detected and how the graph is exposed through [`Graph::undirected_view`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type NodeId = usize;

/// Which endpoint count is used as a node's degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    /// Arcs received. The default: a page's degree is the Likes it receives.
    #[default]
    In,
    Out,
    Total,
}

impl FromStr for DegreeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "in" => Ok(DegreeMode::In),
            "out" => Ok(DegreeMode::Out),
            "total" => Ok(DegreeMode::Total),
            other => Err(Error::Parameter(format!(
                "degree mode must be one of in, out, total (got `{other}`)"
            ))),
        }
    }
}

impl fmt::Display for DegreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeMode::In => "in",
            DegreeMode::Out => "out",
            DegreeMode::Total => "total",
        })
    }
}

/// Per-node degree counts under one [`DegreeMode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    mode: DegreeMode,
    degrees: Vec<usize>,
}

impl DegreeSequence {
    /// Wraps raw degree values, e.g. ones read from a degree file.
    pub fn from_values(mode: DegreeMode, degrees: Vec<usize>) -> Self {
        Self { mode, degrees }
    }

    pub fn mode(&self) -> DegreeMode {
        self.mode
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// Counts of records discarded while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DropStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    dropped: DropStats,
}

impl Graph {
    /// Builds a graph from labelled edges.
    ///
    /// Labels are interned to dense ids in first-seen order. Self-loops and
    /// repeated edges are dropped and counted in [`Graph::dropped`]; when
    /// `directed` is false, `(a, b)` and `(b, a)` are the same edge.
    pub fn from_edge_list<I, S>(edges: I, directed: bool) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut builder = GraphBuilder::new(directed);
        for (src, dst) in edges {
            builder.add_edge(src.as_ref(), dst.as_ref());
        }
        builder.build()
    }

    /// Builds a graph on nodes `0..n` labelled by their decimal id.
    pub fn from_id_edges<I>(n: usize, edges: I, directed: bool) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut builder = GraphBuilder::with_numbered_nodes(n, directed);
        for (src, dst) in edges {
            builder.add_edge_ids(src, dst);
        }
        builder.build()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn dropped(&self) -> DropStats {
        self.dropped
    }

    /// Stored arcs leaving `node`, in insertion order.
    pub fn out_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// All stored arcs, grouped by source id.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count())
            .flat_map(move |src| self.out_neighbors(src).iter().map(move |&dst| (src, dst)))
    }

    pub fn degree_sequence(&self, mode: DegreeMode) -> DegreeSequence {
        degree_sequence(self, mode)
    }

    /// Symmetric adjacency where each node lists its stored out-neighbors
    /// followed by its in-neighbors (ascending source id).
    pub fn undirected_view(&self) -> Adjacency {
        let n = self.node_count();
        let mut degree = vec![0usize; n];
        for (src, dst) in self.edges() {
            degree[src] += 1;
            degree[dst] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill: Vec<usize> = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for src in 0..n {
            for &dst in self.out_neighbors(src) {
                targets[fill[src]] = dst;
                fill[src] += 1;
            }
        }
        for (src, dst) in self.edges() {
            targets[fill[dst]] = src;
            fill[dst] += 1;
        }
        Adjacency { offsets, targets }
    }
}

/// Plain CSR neighbor lists without labels.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }
}

/// Incremental constructor for [`Graph`].
#[derive(Debug)]
pub struct GraphBuilder {
    directed: bool,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    seen: HashSet<(NodeId, NodeId)>,
    dropped: DropStats,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            labels: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            seen: HashSet::new(),
            dropped: DropStats::default(),
        }
    }

    pub fn with_numbered_nodes(n: usize, directed: bool) -> Self {
        let mut builder = Self::new(directed);
        for id in 0..n {
            builder.intern(&id.to_string());
        }
        builder
    }

    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    /// Returns whether the edge was kept.
    pub fn add_edge(&mut self, src: &str, dst: &str) -> bool {
        let s = self.intern(src);
        let d = self.intern(dst);
        self.add_edge_ids(s, d)
    }

    /// Returns whether the edge was kept. Both ids must already exist.
    pub fn add_edge_ids(&mut self, src: NodeId, dst: NodeId) -> bool {
        assert!(
            src < self.labels.len() && dst < self.labels.len(),
            "edge ({src}, {dst}) references unknown node"
        );
        if src == dst {
            self.dropped.self_loops += 1;
            return false;
        }
        let key = if self.directed {
            (src, dst)
        } else {
            (src.min(dst), src.max(dst))
        };
        if !self.seen.insert(key) {
            self.dropped.duplicates += 1;
            return false;
        }
        self.edges.push((src, dst));
        true
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let mut offsets = vec![0usize; n + 1];
        for &(src, _) in &self.edges {
            offsets[src + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; self.edges.len()];
        for &(src, dst) in &self.edges {
            targets[fill[src]] = dst;
            fill[src] += 1;
        }
        Graph {
            directed: self.directed,
            offsets,
            targets,
            labels: self.labels,
            index: self.index,
            dropped: self.dropped,
        }
    }
}

/// Per-node degrees. Undirected graphs have no arc orientation, so every
/// mode counts both endpoints there.
pub fn degree_sequence(g: &Graph, mode: DegreeMode) -> DegreeSequence {
    let mode = if g.is_directed() { mode } else { DegreeMode::Total };
    let mut degrees = vec![0usize; g.node_count()];
    for (src, dst) in g.edges() {
        match mode {
            DegreeMode::In => degrees[dst] += 1,
            DegreeMode::Out => degrees[src] += 1,
            DegreeMode::Total => {
                degrees[src] += 1;
                degrees[dst] += 1;
            }
        }
    }
    DegreeSequence { mode, degrees }
}

/// Size of the largest weakly connected component; 0 for an empty graph.
pub fn giant_component_size(g: &Graph) -> usize {
    giant_component_size_among(g, |_| true)
}

/// Largest weakly connected component of the subgraph induced by the nodes
/// for which `alive` returns true.
pub fn giant_component_size_among<F>(g: &Graph, alive: F) -> usize
where
    F: Fn(NodeId) -> bool,
{
    let n = g.node_count();
    let mut sets = UnionFind::new(n);
    for (src, dst) in g.edges() {
        if alive(src) && alive(dst) {
            sets.union(src, dst);
        }
    }
    let mut sizes = vec![0usize; n];
    let mut best = 0;
    for v in (0..n).filter(|&v| alive(v)) {
        let root = sets.find(v);
        sizes[root] += 1;
        best = best.max(sizes[root]);
    }
    best
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn star(leaves: usize) -> Graph {
        Graph::from_edge_list((1..=leaves).map(|i| ("hub".to_string(), format!("leaf{i}"))), true)
    }

    #[test]
    fn builds_simple_chain() {
        let g = Graph::from_edge_list([("a", "b"), ("b", "c")], true);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.id("a"), Some(0));
        assert_eq!(g.id("c"), Some(2));
    }

    #[test]
    fn drops_self_loops_and_duplicates() {
        let g = Graph::from_edge_list([("a", "a"), ("a", "b"), ("a", "b")], true);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(
            g.dropped(),
            DropStats {
                self_loops: 1,
                duplicates: 1
            }
        );
    }

    #[test]
    fn undirected_dedup_ignores_orientation() {
        let g = Graph::from_edge_list([("a", "b"), ("b", "a")], false);
        assert_eq!(g.edge_count(), 1);
        let d = Graph::from_edge_list([("a", "b"), ("b", "a")], true);
        assert_eq!(d.edge_count(), 2);
    }

    #[test]
    fn adjacency_matches_brute_force_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let names = ["n0", "n1", "n2", "n3", "n4", "n5"];
        let edges: Vec<(&str, &str)> = (0..9)
            .map(|_| (names[rng.gen_range(0..6)], names[rng.gen_range(0..6)]))
            .collect();

        // brute-force oracle: ordered neighbor map keyed by label
        let mut oracle: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for &(s, d) in &edges {
            if s != d && !oracle.get(s).is_some_and(|v| v.contains(&d)) {
                oracle.entry(s).or_default().push(d);
            }
        }

        let g = Graph::from_edge_list(edges.iter().copied(), true);
        for v in 0..g.node_count() {
            let got: Vec<&str> = g.out_neighbors(v).iter().map(|&u| g.label(u)).collect();
            let want = oracle.get(g.label(v)).cloned().unwrap_or_default();
            assert_eq!(got, want, "neighbors of {}", g.label(v));
        }
        let oracle_edges: usize = oracle.values().map(Vec::len).sum();
        assert_eq!(g.edge_count(), oracle_edges);
    }

    #[test]
    fn star_degrees() {
        let g = star(10);
        let out = g.degree_sequence(DegreeMode::Out);
        assert_eq!(out.degrees()[0], 10);
        assert!(out.degrees()[1..].iter().all(|&d| d == 0));
        let inn = g.degree_sequence(DegreeMode::In);
        assert_eq!(inn.degrees()[0], 0);
        assert!(inn.degrees()[1..].iter().all(|&d| d == 1));
    }

    #[test]
    fn degrees_match_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let raw: Vec<(usize, usize)> = (0..9).map(|_| (rng.gen_range(0..6), rng.gen_range(0..6))).collect();
        let g = Graph::from_id_edges(6, raw.iter().copied(), true);
        let kept: Vec<(usize, usize)> = g.edges().collect();
        for mode in [DegreeMode::In, DegreeMode::Out, DegreeMode::Total] {
            let seq = g.degree_sequence(mode);
            for v in 0..6 {
                let count = kept
                    .iter()
                    .map(|&(s, d)| match mode {
                        DegreeMode::In => usize::from(d == v),
                        DegreeMode::Out => usize::from(s == v),
                        DegreeMode::Total => usize::from(s == v) + usize::from(d == v),
                    })
                    .sum::<usize>();
                assert_eq!(seq.degrees()[v], count);
            }
        }
    }

    #[test]
    fn giant_component_basics() {
        let k5: Vec<(usize, usize)> = (0..5).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        assert_eq!(giant_component_size(&Graph::from_id_edges(5, k5, false)), 5);

        let triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
        assert_eq!(giant_component_size(&Graph::from_id_edges(6, triangles, false)), 3);

        assert_eq!(giant_component_size(&Graph::from_id_edges(0, [], true)), 0);
    }

    #[test]
    fn giant_component_matches_union_find_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let raw: Vec<(usize, usize)> = (0..40).map(|_| (rng.gen_range(0..50), rng.gen_range(0..50))).collect();
        let g = Graph::from_id_edges(50, raw.iter().copied(), true);

        // independent oracle: naive label propagation until fixpoint
        let mut comp: Vec<usize> = (0..50).collect();
        loop {
            let mut changed = false;
            for &(a, b) in &raw {
                let m = comp[a].min(comp[b]);
                if comp[a] != m || comp[b] != m {
                    comp[a] = m;
                    comp[b] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut sizes = BTreeMap::new();
        for c in comp {
            *sizes.entry(c).or_insert(0) += 1;
        }
        assert_eq!(giant_component_size(&g), *sizes.values().max().unwrap());
    }

    #[test]
    fn undirected_view_is_symmetric() {
        let g = Graph::from_id_edges(4, [(0, 1), (2, 0), (3, 2)], false);
        let view = g.undirected_view();
        assert_eq!(view.neighbors(0), &[1, 2]);
        assert_eq!(view.neighbors(2), &[0, 3]);
        for v in 0..4 {
            for &u in view.neighbors(v) {
                assert!(view.neighbors(u).contains(&v));
            }
        }
    }

    #[test]
    fn parses_degree_mode() {
        assert_eq!("total".parse::<DegreeMode>().unwrap(), DegreeMode::Total);
        assert!("both".parse::<DegreeMode>().is_err());
        assert_eq!(DegreeMode::default(), DegreeMode::In);
    }

    #[test]
    fn undirected_modes_count_both_endpoints() {
        let g = Graph::from_id_edges(3, [(0, 1), (0, 2)], false);
        for mode in [DegreeMode::In, DegreeMode::Out, DegreeMode::Total] {
            assert_eq!(g.degree_sequence(mode).degrees(), &[2, 1, 1]);
        }
    }
}
