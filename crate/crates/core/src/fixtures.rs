//! Bundled example pairs: three walk-distinguishable pairs (`G`, `H`, `M`) and
//! three pairs whose strata quotients coincide (`Q4`/`HOFFMAN`, `F6A`/`F6B`,
//! `GAMMA1`/`GAMMA2`).
//!
//! Edge lists were transcribed from figure drawings and are stored 1-based
//! alongside a manifest holding the origin vertex, strata blocks, printed
//! quotient matrix and printed degree list of every graph.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};
use crate::io::graph_from_json;
use crate::matrix::RealSymMatrix;

pub const NAMES: [&str; 12] = [
    "G1", "G2", "H1", "H2", "M1", "M2", "Q4", "HOFFMAN", "F6A", "F6B", "GAMMA1", "GAMMA2",
];

/// Pairs whose printed quotients differ.
pub const WALK_PAIRS: [(&str, &str); 3] = [("G1", "G2"), ("H1", "H2"), ("M1", "M2")];

/// Pairs whose printed quotients coincide.
pub const ENTROPY_PAIRS: [(&str, &str); 3] = [("Q4", "HOFFMAN"), ("F6A", "F6B"), ("GAMMA1", "GAMMA2")];

const MANIFEST: &str = include_str!("../fixtures/manifest.json");

fn graph_text(file: &str) -> Option<&'static str> {
    Some(match file {
        "g1.json" => include_str!("../fixtures/g1.json"),
        "g2.json" => include_str!("../fixtures/g2.json"),
        "h1.json" => include_str!("../fixtures/h1.json"),
        "h2.json" => include_str!("../fixtures/h2.json"),
        "m1.json" => include_str!("../fixtures/m1.json"),
        "m2.json" => include_str!("../fixtures/m2.json"),
        "q4.json" => include_str!("../fixtures/q4.json"),
        "hoffman.json" => include_str!("../fixtures/hoffman.json"),
        "f6a.json" => include_str!("../fixtures/f6a.json"),
        "f6b.json" => include_str!("../fixtures/f6b.json"),
        "gamma1.json" => include_str!("../fixtures/gamma1.json"),
        "gamma2.json" => include_str!("../fixtures/gamma2.json"),
        _ => return None,
    })
}

#[derive(Debug, Deserialize)]
struct Manifest {
    fixtures: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    name: String,
    file: String,
    pair: String,
    index_base: usize,
    origin: usize,
    strata: Vec<Vec<usize>>,
    printed_quotient: Vec<Vec<Entry>>,
    printed_degrees: Vec<usize>,
    vertices: usize,
    edges: usize,
    verified: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Num(f64),
    Text(String),
}

impl Entry {
    fn value(&self) -> Result<f64> {
        match self {
            Entry::Num(x) => Ok(*x),
            Entry::Text(s) => parse_entry(s),
        }
    }
}

/// Parses `"3"`, `"-1"`, `"sqrt(6)"` or `"-sqrt(2)"`.
pub fn parse_entry(s: &str) -> Result<f64> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s),
    };
    let v = if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        inner
            .trim()
            .parse::<f64>()
            .map(f64::sqrt)
            .map_err(|_| Error::Parse(format!("bad matrix entry '{s}'")))?
    } else {
        body.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad matrix entry '{s}'")))?
    };
    Ok(sign * v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleFixture {
    pub name: String,
    pub graph: Graph,
    /// 0-based.
    pub origin: usize,
    /// 0-based strata in the order the printed quotient uses.
    pub canonical_strata: VertexPartition,
    pub printed_quotient: RealSymMatrix,
    pub printed_degrees: Vec<usize>,
    pub printed_vertices: usize,
    pub printed_edges: usize,
    pub pair_id: String,
    pub verified: bool,
}

fn manifest() -> Manifest {
    serde_json::from_str(MANIFEST).expect("bundled manifest parses")
}

pub fn example(name: &str) -> Result<ExampleFixture> {
    let key = name.to_ascii_uppercase();
    let entry = manifest()
        .fixtures
        .into_iter()
        .find(|e| e.name == key)
        .ok_or_else(|| Error::UnknownName(name.to_owned()))?;
    let text = graph_text(&entry.file).ok_or_else(|| Error::UnknownName(entry.file.clone()))?;
    let graph = graph_from_json(text)?;
    let n = graph.n();
    let base = entry.index_base;
    let shift = |v: usize| {
        v.checked_sub(base)
            .filter(|&x| x < n)
            .ok_or(Error::IndexOutOfRange { index: v, n })
    };
    let blocks = entry
        .strata
        .iter()
        .map(|b| b.iter().map(|&v| shift(v)).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let rows = entry
        .printed_quotient
        .iter()
        .map(|r| r.iter().map(Entry::value).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(ExampleFixture {
        name: entry.name,
        origin: shift(entry.origin)?,
        canonical_strata: VertexPartition::new(blocks, n)?,
        printed_quotient: RealSymMatrix::from_rows(&rows)?,
        printed_degrees: entry.printed_degrees,
        printed_vertices: entry.vertices,
        printed_edges: entry.edges,
        pair_id: entry.pair,
        verified: entry.verified,
        graph,
    })
}

/// The partner of a fixture within its pair.
pub fn partner(name: &str) -> Result<&'static str> {
    let key = name.to_ascii_uppercase();
    WALK_PAIRS
        .iter()
        .chain(ENTROPY_PAIRS.iter())
        .find_map(|&(l, r)| {
            if l == key {
                Some(r)
            } else if r == key {
                Some(l)
            } else {
                None
            }
        })
        .ok_or_else(|| Error::UnknownName(name.to_owned()))
}
