use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    #[error("empty distribution: no positive degrees")]
    EmptyDistribution,

    #[error("too few points: need at least {needed}, got {got}")]
    Range { needed: usize, got: usize },

    #[error("singular fit: {0}")]
    Singular(String),

    #[error("too few samples: need at least {needed}, got {got}")]
    SampleSize { needed: usize, got: usize },

    #[error("MLE diverges: {0}")]
    Divergence(String),

    #[error("unknown node label `{0}`")]
    UnknownNode(String),

    #[error("invalid cursor for node `{0}`")]
    InvalidCursor(String),

    #[error("API call limit of {0} reached")]
    RateLimited(usize),

    #[error("no reachable pairs in graph")]
    NoReachablePairs,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
