//! Walk-based verdicts for a pair of graphs.
//!
//! A verdict is one-sided: differing quotients or traces prove the pair
//! non-isomorphic under the supplied origins and partitions; agreement proves
//! nothing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::FamilyInstance;
use crate::graph::{Graph, VertexPartition};
use crate::matrix::RealSymMatrix;
use crate::strata::{bfs_stratification, quotient, DEFAULT_CLOSURE_TOL};
use crate::walk::ctqw::{stratum_probabilities, TimeGrid};
use crate::walk::fermion::{fermionic_quotient, Phi7Convention, DEFAULT_NNZ_CAP};

/// One side of a comparison.
#[derive(Debug, Clone)]
pub struct WalkSubject {
    pub graph: Graph,
    pub origin: usize,
    /// Strata to compare; BFS strata from `origin` when `None`.
    pub partition: Option<VertexPartition>,
    /// Needed for the fermionic strategy.
    pub family: Option<FamilyInstance>,
}

impl WalkSubject {
    pub fn new(graph: Graph, origin: usize) -> Self {
        Self {
            graph,
            origin,
            partition: None,
            family: None,
        }
    }

    pub fn with_partition(mut self, p: VertexPartition) -> Self {
        self.partition = Some(p);
        self
    }

    pub fn from_family(inst: FamilyInstance) -> Self {
        Self {
            graph: inst.graph.clone(),
            origin: 0,
            partition: Some(inst.block_partition.clone()),
            family: Some(inst),
        }
    }

    fn strata(&self) -> Result<VertexPartition> {
        match &self.partition {
            Some(p) => Ok(p.clone()),
            None => Ok(bfs_stratification(&self.graph, self.origin)?.partition),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkStrategy {
    Quotient,
    Trace,
    Fermionic,
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub strategies: Vec<WalkStrategy>,
    pub tol: f64,
    pub grid: TimeGrid,
    pub convention: Phi7Convention,
    pub cap: u128,
    pub exec: Execution,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            strategies: vec![WalkStrategy::Quotient, WalkStrategy::Trace],
            tol: 1e-8,
            grid: TimeGrid::default(),
            convention: Phi7Convention::default(),
            cap: DEFAULT_NNZ_CAP,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    QuotientShape {
        left: usize,
        right: usize,
    },
    QuotientEntry {
        row: usize,
        col: usize,
        left: f64,
        right: f64,
    },
    TraceGap {
        time: f64,
        stratum: usize,
        gap: f64,
    },
    FermionicEntry {
        row: usize,
        col: usize,
        left: f64,
        right: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum WalkVerdict {
    WalkDistinguished { strategy: WalkStrategy, witness: Witness },
    WalkInconclusive { max_gap: f64, notes: Vec<String> },
}

impl WalkVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, WalkVerdict::WalkDistinguished { .. })
    }
}

fn largest_entry_gap(a: &RealSymMatrix, b: &RealSymMatrix) -> (usize, usize, f64) {
    let mut best = (0, 0, 0.0);
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let d = (a.get(i, j) - b.get(i, j)).abs();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

enum Outcome {
    Found(Witness),
    Gap(f64),
    Skipped(String),
}

fn compare_quotients(l: &WalkSubject, r: &WalkSubject, tol: f64) -> Result<Outcome> {
    let ql = quotient(&l.graph, &l.strata()?, DEFAULT_CLOSURE_TOL)?;
    let qr = quotient(&r.graph, &r.strata()?, DEFAULT_CLOSURE_TOL)?;
    if !ql.closed || !qr.closed {
        return Ok(Outcome::Skipped(format!(
            "quotient skipped: partitions not closed (residuals {:.3e}, {:.3e})",
            ql.residual, qr.residual
        )));
    }
    if ql.matrix.dim() != qr.matrix.dim() {
        return Ok(Outcome::Found(Witness::QuotientShape {
            left: ql.matrix.dim(),
            right: qr.matrix.dim(),
        }));
    }
    let (i, j, d) = largest_entry_gap(&ql.matrix, &qr.matrix);
    Ok(if d > tol {
        Outcome::Found(Witness::QuotientEntry {
            row: i,
            col: j,
            left: ql.matrix.get(i, j),
            right: qr.matrix.get(i, j),
        })
    } else {
        Outcome::Gap(d)
    })
}

fn compare_traces(l: &WalkSubject, r: &WalkSubject, cfg: &WalkConfig) -> Result<Outcome> {
    let (pl, pr) = (l.strata()?, r.strata()?);
    if pl.len() != pr.len() {
        return Ok(Outcome::Skipped("trace skipped: different stratum counts".into()));
    }
    let tl = stratum_probabilities(&l.graph, l.origin, Some(&pl), &cfg.grid, cfg.exec)?;
    let tr = stratum_probabilities(&r.graph, r.origin, Some(&pr), &cfg.grid, cfg.exec)?;
    let Some((gap, time, stratum)) = tl.trace.max_gap(&tr.trace) else {
        return Ok(Outcome::Skipped("trace skipped: empty grid".into()));
    };
    Ok(if gap > cfg.tol {
        Outcome::Found(Witness::TraceGap { time, stratum, gap })
    } else {
        Outcome::Gap(gap)
    })
}

fn compare_fermionic(l: &WalkSubject, r: &WalkSubject, cfg: &WalkConfig) -> Result<Outcome> {
    let (Some(fl), Some(fr)) = (&l.family, &r.family) else {
        return Ok(Outcome::Skipped(
            "fermionic skipped: inputs are not family graphs".into(),
        ));
    };
    if fl.a != fr.a {
        return Ok(Outcome::Skipped("fermionic skipped: particle counts differ".into()));
    }
    let ql = fermionic_quotient(fl, cfg.convention, cfg.cap, cfg.exec)?;
    let qr = fermionic_quotient(fr, cfg.convention, cfg.cap, cfg.exec)?;
    if ql.residual > DEFAULT_CLOSURE_TOL || qr.residual > DEFAULT_CLOSURE_TOL {
        return Ok(Outcome::Skipped(format!(
            "fermionic skipped: basis not closed (residuals {:.3e}, {:.3e})",
            ql.residual, qr.residual
        )));
    }
    let (i, j, d) = largest_entry_gap(&ql.matrix, &qr.matrix);
    Ok(if d > cfg.tol {
        Outcome::Found(Witness::FermionicEntry {
            row: i,
            col: j,
            left: ql.matrix.get(i, j),
            right: qr.matrix.get(i, j),
        })
    } else {
        Outcome::Gap(d)
    })
}

pub fn walk_verdict(left: &WalkSubject, right: &WalkSubject, cfg: &WalkConfig) -> Result<WalkVerdict> {
    if left.graph.n() != right.graph.n() {
        return Err(Error::SizeMismatch(left.graph.n(), right.graph.n()));
    }
    let mut max_gap = 0.0f64;
    let mut notes = Vec::new();
    for &strategy in &cfg.strategies {
        let outcome = match strategy {
            WalkStrategy::Quotient => compare_quotients(left, right, cfg.tol)?,
            WalkStrategy::Trace => compare_traces(left, right, cfg)?,
            WalkStrategy::Fermionic => compare_fermionic(left, right, cfg)?,
        };
        match outcome {
            Outcome::Found(witness) => return Ok(WalkVerdict::WalkDistinguished { strategy, witness }),
            Outcome::Gap(g) => max_gap = max_gap.max(g),
            Outcome::Skipped(note) => notes.push(note),
        }
    }
    Ok(WalkVerdict::WalkInconclusive { max_gap, notes })
}

/// Independent verdicts for many pairs.
pub fn batch_verdicts(pairs: &[(WalkSubject, WalkSubject)], cfg: &WalkConfig) -> Vec<Result<WalkVerdict>> {
    let inner = WalkConfig {
        exec: Execution::Sequential,
        ..cfg.clone()
    };
    cfg.exec.map(pairs, |(l, r)| walk_verdict(l, r, &inner))
}
