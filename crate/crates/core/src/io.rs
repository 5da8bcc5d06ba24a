//! Graph and partition file formats.
//!
//! Graph JSON:
//!
//! ```json
//! {"name": "K2", "n": 2, "index_base": 0, "edges": [[0, 1]]}
//! ```
//!
//! `index_base` defaults to 0; with 1 every index in `edges` (and `loops`) is
//! shifted down on read. The optional `loops` list only appears for family
//! graphs that carry loop vertices; a self-pair inside `edges` is rejected.
//!
//! Plain text: the first non-comment line is `n`, every following line is `u v`
//! (0-based). Lines starting with `#` are ignored.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    #[serde(default)]
    pub index_base: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub blocks: Vec<Vec<usize>>,
}

fn shift(x: usize, base: usize, n: usize) -> Result<usize> {
    x.checked_sub(base).ok_or(Error::IndexOutOfRange { index: x, n })
}

impl GraphDoc {
    pub fn into_graph(self) -> Result<Graph> {
        if self.index_base > 1 {
            return Err(Error::Parse(format!(
                "index_base must be 0 or 1, got {}",
                self.index_base
            )));
        }
        let base = self.index_base;
        let n = self.n;
        let edges = self
            .edges
            .iter()
            .map(|&[u, v]| Ok((shift(u, base, n)?, shift(v, base, n)?)))
            .collect::<Result<Vec<_>>>()?;
        let loops = self
            .loops
            .iter()
            .map(|&v| shift(v, base, n))
            .collect::<Result<Vec<_>>>()?;
        let g = Graph::with_loops(n, edges, loops)?;
        Ok(match self.name {
            Some(name) => g.named(name),
            None => g,
        })
    }

    pub fn from_graph(g: &Graph, index_base: usize) -> Self {
        Self {
            name: g.name().map(str::to_owned),
            n: g.n(),
            index_base,
            edges: g.edges().map(|(u, v)| [u + index_base, v + index_base]).collect(),
            loops: g.loops().map(|v| v + index_base).collect(),
        }
    }
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_graph()
}

pub fn graph_to_json(g: &Graph, index_base: usize) -> String {
    serde_json::to_string(&GraphDoc::from_graph(g, index_base)).expect("graph serializes")
}

pub fn graph_from_text(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the vertex count, got '{first}'")))?;
    let mut pairs = Vec::new();
    for (lineno, line) in lines {
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("line {}: expected 'u v'", lineno + 1)))?;
        match nums[..] {
            [u, v] => pairs.push((u, v)),
            _ => return Err(Error::Parse(format!("line {}: expected 'u v'", lineno + 1))),
        }
    }
    Graph::from_edge_list(n, pairs)
}

/// Reads a graph file, picking the format from the first non-blank character.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        graph_from_json(&text)
    } else {
        graph_from_text(&text)
    }
}

pub fn partition_from_json(text: &str, n: usize, index_base: usize) -> Result<VertexPartition> {
    let doc: PartitionDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let blocks = doc
        .blocks
        .iter()
        .map(|b| b.iter().map(|&v| shift(v, index_base, n)).collect())
        .collect::<Result<Vec<_>>>()?;
    VertexPartition::new(blocks, n)
}

pub fn partition_to_json(p: &VertexPartition, index_base: usize) -> String {
    let doc = PartitionDoc {
        blocks: p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|v| v + index_base).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("partition serializes")
}
