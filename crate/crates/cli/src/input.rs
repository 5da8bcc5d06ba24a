//! Turning command-line graph and partition specs into core types.
//!
//! Vertex labels typed on the command line use the index base of their input:
//! bundled examples are 1-based like the printed figures, graph files use the
//! `index_base` they declare (0 for plain text), family builds are 0-based.

use std::path::{Path, PathBuf};

use clap::Args;
use cospec_core::families::build_family;
use cospec_core::fixtures::example;
use cospec_core::io::{graph_from_text, partition_from_json, GraphDoc};
use cospec_core::strata::bfs_stratification;
use cospec_core::{Family, FamilyInstance, Graph, VertexPartition};

use crate::Failure;

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph file (JSON or plain edge list).
    #[arg(long, conflicts_with_all = ["example", "family"])]
    pub file: Option<PathBuf>,
    /// Bundled example, e.g. G1, Q4, HOFFMAN.
    #[arg(long, conflicts_with = "family")]
    pub example: Option<String>,
    /// Construction family: g4, g5, t4 or t5.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    #[arg(long, default_value_t = 3)]
    pub b: usize,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub label: String,
    pub graph: Graph,
    pub base: usize,
    pub default_origin: usize,
    /// Strata that come with the input (printed strata or family blocks).
    pub strata: Option<VertexPartition>,
    pub family: Option<FamilyInstance>,
}

impl Loaded {
    fn from_family(inst: FamilyInstance) -> Self {
        Self {
            label: format!("{}({},{})", inst.family, inst.a, inst.b),
            graph: inst.graph.clone(),
            base: 0,
            default_origin: 0,
            strata: Some(inst.block_partition.clone()),
            family: Some(inst),
        }
    }

    fn from_example(name: &str) -> Result<Self, Failure> {
        let fx = example(name)?;
        Ok(Self {
            label: fx.name,
            graph: fx.graph,
            base: 1,
            default_origin: fx.origin,
            strata: Some(fx.canonical_strata),
            family: None,
        })
    }

    fn from_file(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let (graph, base) = if text.trim_start().starts_with('{') {
            let doc: GraphDoc = serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let base = doc.index_base;
            (doc.into_graph()?, base)
        } else {
            (graph_from_text(&text)?, 0)
        };
        let label = graph
            .name()
            .map(str::to_owned)
            .unwrap_or_else(|| path.display().to_string());
        Ok(Self {
            label,
            graph,
            base,
            default_origin: 0,
            strata: None,
            family: None,
        })
    }

    pub fn to_internal(&self, label: usize) -> Result<usize, Failure> {
        label
            .checked_sub(self.base)
            .filter(|&v| v < self.graph.n())
            .ok_or_else(|| Failure(format!("vertex {label} is not a vertex of {}", self.label)))
    }

    pub fn to_label(&self, v: usize) -> usize {
        v + self.base
    }

    pub fn labels(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.to_label(v)).collect()
    }

    pub fn origin(&self, requested: Option<usize>) -> Result<usize, Failure> {
        requested.map_or(Ok(self.default_origin), |o| self.to_internal(o))
    }

    /// Explicit partition file, else the input's own strata when the origin is
    /// the one they were drawn from, else BFS strata.
    pub fn partition(&self, origin: usize, file: Option<&Path>) -> Result<VertexPartition, Failure> {
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            return Ok(partition_from_json(&text, self.graph.n(), self.base)?);
        }
        match &self.strata {
            Some(p) if origin == self.default_origin => Ok(p.clone()),
            _ => Ok(bfs_stratification(&self.graph, origin)?.partition),
        }
    }

    /// `strata:i-j` (BFS strata from `origin`) or a comma-separated label list.
    pub fn part_a(&self, spec: &str, origin: usize) -> Result<Vec<usize>, Failure> {
        if let Some(range) = spec.strip_prefix("strata:") {
            let (lo, hi) = range
                .split_once('-')
                .map_or(Some((range, range)), Some)
                .ok_or_else(|| Failure(format!("bad strata range '{range}'")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure(format!("bad strata range '{range}'")))
            };
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            return Ok(cospec_core::strata::strata_union(&self.graph, origin, lo, hi)?);
        }
        let mut out = spec
            .split(',')
            .map(|s| {
                let label = s
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Failure(format!("bad vertex label '{s}' in partA")))?;
                self.to_internal(label)
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub fn load(args: &GraphArgs) -> Result<Loaded, Failure> {
    match (&args.file, &args.example, args.family) {
        (Some(path), _, _) => Loaded::from_file(path),
        (_, Some(name), _) => Loaded::from_example(name),
        (_, _, Some(f)) => Ok(Loaded::from_family(build_family(f, args.a, args.b)?)),
        _ => Err(Failure("give one of --file, --example or --family".into())),
    }
}

/// A positional graph spec: an existing file, `family:a:b`, or an example name.
pub fn load_spec(spec: &str) -> Result<Loaded, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        return Loaded::from_file(path);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if let [fam, a, b] = parts[..] {
        if let (Ok(f), Ok(a), Ok(b)) = (fam.parse::<Family>(), a.parse(), b.parse()) {
            return Ok(Loaded::from_family(build_family(f, a, b)?));
        }
    }
    Loaded::from_example(spec)
}
