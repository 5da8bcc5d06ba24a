//! Distance strata and quotient (strata-basis) matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};
use crate::matrix::RealSymMatrix;

pub const DEFAULT_CLOSURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Stratification {
    pub partition: VertexPartition,
    /// Set when some vertices are unreachable from the origin; the strata
    /// then cover only the origin's component.
    pub unreachable: bool,
}

pub fn bfs_stratification(g: &Graph, origin: usize) -> Result<Stratification> {
    let dist = g.distances_from(origin)?;
    let depth = dist.iter().flatten().copied().max().unwrap_or(0);
    let mut blocks = vec![Vec::new(); depth + 1];
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = d {
            blocks[*d].push(v);
        }
    }
    Ok(Stratification {
        partition: VertexPartition::new(blocks, g.n())?,
        unreachable: dist.iter().any(Option::is_none),
    })
}

/// Vertices in BFS strata `first..=last` from `origin`.
pub fn strata_union(g: &Graph, origin: usize, first: usize, last: usize) -> Result<Vec<usize>> {
    let s = bfs_stratification(g, origin)?;
    if first > last || last >= s.partition.len() {
        return Err(Error::BadPartition(format!(
            "strata {first}-{last} out of range ({} strata from origin {origin})",
            s.partition.len()
        )));
    }
    Ok(s.partition.union_of(first..=last))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientResult {
    pub matrix: RealSymMatrix,
    /// `max |M·P − P·Q|` with `P` the normalized block indicators.
    pub residual: f64,
    pub closed: bool,
}

/// Normalized block indicator columns.
pub fn indicator_basis(p: &VertexPartition, n: usize) -> DMatrix<f64> {
    let mut basis = DMatrix::zeros(n, p.len());
    for (j, blk) in p.blocks().iter().enumerate() {
        let w = 1.0 / (blk.len() as f64).sqrt();
        for &v in blk {
            basis[(v, j)] = w;
        }
    }
    basis
}

/// Projects any symmetric matrix onto the block indicator span.
pub fn project(m: &RealSymMatrix, p: &VertexPartition, tol: f64) -> Result<QuotientResult> {
    let n = m.dim();
    if let Some((b, _)) = p.blocks().iter().enumerate().find(|(_, b)| b.is_empty()) {
        return Err(Error::EmptyBlock(b));
    }
    if let Some(&v) = p.blocks().iter().flatten().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange { index: v, n });
    }
    let blocks = p.blocks();
    let q = RealSymMatrix::from_upper_fn(p.len(), |i, j| {
        let mut s = 0.0;
        for &u in &blocks[i] {
            for &v in &blocks[j] {
                s += m.get(u, v);
            }
        }
        s / ((blocks[i].len() * blocks[j].len()) as f64).sqrt()
    });
    let basis = indicator_basis(p, n);
    let residual = (m.as_matrix() * &basis - &basis * q.as_matrix()).amax();
    Ok(QuotientResult {
        closed: residual <= tol,
        matrix: q,
        residual,
    })
}

pub fn quotient(g: &Graph, p: &VertexPartition, tol: f64) -> Result<QuotientResult> {
    project(&g.adjacency_matrix(), p, tol)
}

/// `max |A_i·e_origin − √κ_i·φ_i|` where `A_i` is the distance-`i` matrix.
pub fn distance_basis_identity_check(g: &Graph, origin: usize, i: usize) -> Result<f64> {
    let s = bfs_stratification(g, origin)?;
    let stratum = s.partition.blocks().get(i).ok_or(Error::EmptyStratum(i))?;
    let kappa = stratum.len() as f64;
    let ai = g.distance_adjacency(i);
    let mut phi = vec![0.0; g.n()];
    for &v in stratum {
        phi[v] = 1.0 / kappa.sqrt();
    }
    Ok((0..g.n())
        .map(|v| (ai.get(v, origin) - kappa.sqrt() * phi[v]).abs())
        .fold(0.0, f64::max))
}
