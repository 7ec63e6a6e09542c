//! Text formats shared by the library and the CLI.
//!
//! Edge lists are UTF-8, one `src<TAB>dst` record per line. Lines starting
//! with `#` are comments; the comment lines `# directed` and `# undirected`
//! override the caller's default orientation when they appear before the
//! first edge. Degree files hold one non-negative integer per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeMode, DegreeSequence, Graph, GraphBuilder};

pub fn read_edge_list<R: BufRead>(reader: R, default_directed: bool) -> Result<Graph> {
    let mut records = Vec::new();
    let mut directed = default_directed;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        let lineno = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            if records.is_empty() {
                match comment.trim() {
                    "directed" => directed = true,
                    "undirected" => directed = false,
                    _ => {}
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let src = fields.next().unwrap_or_default();
        let dst = fields.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: "missing destination field (expected `src<TAB>dst`)".into(),
        })?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: "too many fields (expected `src<TAB>dst`)".into(),
            });
        }
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                message: "empty node label".into(),
            });
        }
        records.push((src.to_owned(), dst.to_owned()));
    }
    let mut builder = GraphBuilder::new(directed);
    for (src, dst) in &records {
        builder.add_edge(src, dst);
    }
    Ok(builder.build())
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# {}", if g.is_directed() { "directed" } else { "undirected" })?;
    for (src, dst) in g.edges() {
        writeln!(out, "{}\t{}", g.label(src), g.label(dst))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a degree file. `#` comments and blank lines are skipped.
pub fn read_degrees<R: BufRead>(reader: R, mode: DegreeMode) -> Result<DegreeSequence> {
    let mut degrees = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value = text.parse::<usize>().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("expected a non-negative integer degree, got `{text}`"),
        })?;
        degrees.push(value);
    }
    Ok(DegreeSequence::from_values(mode, degrees))
}

pub fn write_degrees<W: Write>(degrees: &DegreeSequence, mut out: W) -> Result<()> {
    for d in degrees.degrees() {
        writeln!(out, "{d}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_seed_labels<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut seeds = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let text = line.trim();
        if !text.is_empty() && !text.starts_with('#') {
            seeds.push(text.to_owned());
        }
    }
    Ok(seeds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Bpo,
    Individual,
}

/// One row of the optional node-metadata CSV (`id,kind,likes`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMeta {
    pub id: String,
    pub kind: NodeKind,
    pub likes: u64,
}

pub fn read_node_metadata<R: std::io::Read>(reader: R) -> Result<Vec<NodeMeta>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["id", "kind", "likes"] {
        return Err(Error::Parse {
            line: 1,
            message: "expected header `id,kind,likes`".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, row) in rdr.deserialize().enumerate() {
        let row: NodeMeta = row.map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}
