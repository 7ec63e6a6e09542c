//! Network-science toolkit for scale-free graphs.
//!
//! - [`graph`]: immutable adjacency storage, degrees, components
//! - [`synth`]: seeded preferential-attachment and G(n, p) generators
//! - [`crawl`]: paged neighbor API and budgeted BFS crawler
//! - [`powerlaw`]: degree distributions, log binning, power-law fits
//! - [`diagnostics`]: path lengths and node-removal robustness
//! - [`engage`]: engagement rate and log-log benchmarking
//! - [`io`]: edge-list, degree and metadata file formats

pub mod crawl;
pub mod diagnostics;
pub mod engage;
pub mod error;
pub mod graph;
pub mod io;
pub mod powerlaw;
pub mod regression;
pub mod synth;
mod zeta;

pub use error::{Error, Result};
pub use graph::{DegreeMode, DegreeSequence, Graph, NodeId};
pub use zeta::hurwitz_zeta;
