//! Simulated paged neighbor API and a budgeted breadth-first crawler.
//!
//! The API is an in-process port: [`PagedApi`] is the callable surface and
//! [`SnapshotApi`] serves pages from an immutable [`Graph`]. A directed
//! snapshot exposes each node's stored out-neighbors; an undirected one
//! exposes the full neighbor list of its undirected view.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, NodeId};

/// Resume token for the next page of one node's neighbor list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cursor {
    node: NodeId,
    page: usize,
}

impl fmt::Display for Cursor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}.{:x}", self.node, self.page)
    }
}

impl FromStr for Cursor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCursor(s.to_owned());
        let (node, page) = s.split_once('.').ok_or_else(bad)?;
        Ok(Cursor {
            node: usize::from_str_radix(node, 16).map_err(|_| bad())?,
            page: usize::from_str_radix(page, 16).map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub node: String,
    pub index: usize,
    pub neighbors: Vec<String>,
    pub next: Option<Cursor>,
}

/// A rate-limited neighbor listing service.
pub trait PagedApi {
    /// Whether `label` names a node. Lookups are free: they do not count as
    /// API calls.
    fn has_node(&self, label: &str) -> bool;

    /// Fetches one page of `label`'s neighbors; `None` starts at page 0.
    fn fetch(&self, label: &str, cursor: Option<Cursor>) -> Result<Page>;
}

#[derive(Debug)]
pub struct SnapshotApi<'g> {
    graph: &'g Graph,
    undirected: Option<Adjacency>,
    page_size: usize,
    call_limit: Option<usize>,
    calls: AtomicUsize,
}

/// Serves `g` in pages of `page_size` neighbors.
pub fn serve_snapshot(g: &Graph, page_size: usize) -> Result<SnapshotApi<'_>> {
    if page_size == 0 {
        return Err(Error::Parameter("page size must be at least 1".into()));
    }
    Ok(SnapshotApi {
        graph: g,
        undirected: (!g.is_directed()).then(|| g.undirected_view()),
        page_size,
        call_limit: None,
        calls: AtomicUsize::new(0),
    })
}

impl<'g> SnapshotApi<'g> {
    /// Makes every fetch after the first `limit` fail with
    /// [`Error::RateLimited`].
    pub fn with_call_limit(mut self, limit: usize) -> Self {
        self.call_limit = Some(limit);
        self
    }

    pub fn page_size(&self) -> usize {
        self.page_size
    }

    pub fn calls_served(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Full neighbor list served for `node`.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        match &self.undirected {
            Some(view) => view.neighbors(node),
            None => self.graph.out_neighbors(node),
        }
    }

    /// Number of pages for `node`; an empty neighbor list still takes one.
    pub fn page_count(&self, node: NodeId) -> usize {
        self.neighbors(node).len().div_ceil(self.page_size).max(1)
    }
}

impl PagedApi for SnapshotApi<'_> {
    fn has_node(&self, label: &str) -> bool {
        self.graph.id(label).is_some()
    }

    fn fetch(&self, label: &str, cursor: Option<Cursor>) -> Result<Page> {
        let node = self
            .graph
            .id(label)
            .ok_or_else(|| Error::UnknownNode(label.to_owned()))?;
        let page = match cursor {
            None => 0,
            Some(c) if c.node == node && c.page < self.page_count(node) => c.page,
            Some(_) => return Err(Error::InvalidCursor(label.to_owned())),
        };
        let served = self.calls.fetch_add(1, Ordering::Relaxed);
        if let Some(limit) = self.call_limit {
            if served >= limit {
                self.calls.fetch_sub(1, Ordering::Relaxed);
                return Err(Error::RateLimited(limit));
            }
        }
        let all = self.neighbors(node);
        let start = (page * self.page_size).min(all.len());
        let end = (start + self.page_size).min(all.len());
        let next = (page + 1 < self.page_count(node)).then_some(Cursor {
            node,
            page: page + 1,
        });
        Ok(Page {
            node: label.to_owned(),
            index: page,
            neighbors: all[start..end].iter().map(|&v| self.graph.label(v).to_owned()).collect(),
            next,
        })
    }
}

/// One API call as written to the crawl log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRecord {
    pub node: String,
    pub page_index: usize,
    pub returned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrawlResult {
    /// Discovered `(src, dst)` pairs in fetch order, without repeats.
    pub edges: Vec<(String, String)>,
    /// Nodes whose neighbor listing was started, in BFS order.
    pub visit_order: Vec<String>,
    pub api_calls: usize,
    /// Nodes still queued when the crawl stopped, front first. A node whose
    /// pages were only partly fetched is listed first.
    pub frontier_remaining: Vec<String>,
    pub truncated: bool,
    pub log: Vec<CallRecord>,
}

impl CrawlResult {
    /// Reconstructs the crawled network. For undirected crawls the two
    /// orientations of an edge collapse into one.
    pub fn to_graph(&self, directed: bool) -> Graph {
        Graph::from_edge_list(self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())), directed)
    }

    pub fn write_log<W: Write>(&self, mut out: W) -> Result<()> {
        for record in &self.log {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Breadth-first crawl from `seeds`, spending at most `budget` API calls.
///
/// Seeds are queued in the given order (repeats ignored). Each dequeued
/// node has all its pages fetched back to back; unseen neighbors are queued
/// in page order. The crawl stops when the frontier empties, the budget is
/// spent, or the API reports a rate limit.
pub fn bfs_crawl<A: PagedApi + ?Sized>(api: &A, seeds: &[String], budget: usize) -> Result<CrawlResult> {
    if seeds.is_empty() {
        return Err(Error::Parameter("at least one seed is required".into()));
    }
    if let Some(unknown) = seeds.iter().find(|s| !api.has_node(s)) {
        return Err(Error::UnknownNode(unknown.clone()));
    }

    let mut seen: HashSet<String> = HashSet::new();
    let mut frontier: VecDeque<String> = VecDeque::new();
    for seed in seeds {
        if seen.insert(seed.clone()) {
            frontier.push_back(seed.clone());
        }
    }

    let mut result = CrawlResult {
        edges: Vec::new(),
        visit_order: Vec::new(),
        api_calls: 0,
        frontier_remaining: Vec::new(),
        truncated: false,
        log: Vec::new(),
    };
    let mut edge_seen: HashSet<(String, String)> = HashSet::new();

    'nodes: while let Some(node) = frontier.pop_front() {
        let mut cursor = None;
        let mut started = false;
        loop {
            if result.api_calls >= budget {
                result.truncated = true;
                frontier.push_front(node);
                break 'nodes;
            }
            let page = match api.fetch(&node, cursor) {
                Ok(page) => page,
                Err(Error::RateLimited(_)) => {
                    result.truncated = true;
                    frontier.push_front(node);
                    break 'nodes;
                }
                Err(e) => return Err(e),
            };
            result.api_calls += 1;
            if !started {
                result.visit_order.push(node.clone());
                started = true;
            }
            result.log.push(CallRecord {
                node: node.clone(),
                page_index: page.index,
                returned: page.neighbors.len(),
            });
            for neighbor in page.neighbors {
                let edge = (node.clone(), neighbor.clone());
                if edge_seen.insert(edge.clone()) {
                    result.edges.push(edge);
                }
                if seen.insert(neighbor.clone()) {
                    frontier.push_back(neighbor);
                }
            }
            match page.next {
                Some(next) => cursor = Some(next),
                None => break,
            }
        }
    }
    result.frontier_remaining = frontier.into_iter().collect();
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub node_recall: f64,
    pub edge_recall: f64,
}

/// Share of `truth`'s nodes that were visited and of its edges that were
/// discovered. An empty truth graph counts as fully covered.
pub fn crawl_coverage(result: &CrawlResult, truth: &Graph) -> Coverage {
    let visited: HashSet<NodeId> = result.visit_order.iter().filter_map(|l| truth.id(l)).collect();
    let truth_edges: HashSet<(NodeId, NodeId)> = truth.edges().map(|e| edge_key(truth, e)).collect();
    let found: HashSet<(NodeId, NodeId)> = result
        .edges
        .iter()
        .filter_map(|(a, b)| Some(edge_key(truth, (truth.id(a)?, truth.id(b)?))))
        .filter(|key| truth_edges.contains(key))
        .collect();
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Coverage {
        node_recall: ratio(visited.len(), truth.node_count()),
        edge_recall: ratio(found.len(), truth_edges.len()),
    }
}

fn edge_key(g: &Graph, (a, b): (NodeId, NodeId)) -> (NodeId, NodeId) {
    if g.is_directed() {
        (a, b)
    } else {
        (a.min(b), a.max(b))
    }
}
