//! The scalable families `G4(a,b)`, `G5(a,b)`, `T4(a,b)`, `T5(a,b)`.
//!
//! Each graph has `2a + 6b` vertices split into eight role blocks. The
//! canonical vertex order used everywhere in this crate is
//!
//! ```text
//! block:  0    1    2    3    4     5     6     7
//! role:   C    X    Y    Z    X'    Y'    Z'    C'
//! size:   a    b    b    b    b     b     b     a
//! ```
//!
//! where `(C, X, Y, Z)` index the four blocks of the half matrices `A0`, `A1`
//! and the primed roles are the second copy. Under this order the `a = 1`
//! quotient over the eight blocks is the 8×8 strata matrix of each family.
//!
//! The entanglement pipeline uses a second relabeling (see
//! [`schur_block_order`]) that groups the blocks eliminated by Schur
//! complement at both ends of the matrix.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};
use crate::matrix::{block_compose, two_copy, Block, RealSymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    G4,
    G5,
    T4,
    T5,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G4, Family::G5, Family::T4, Family::T5];

    /// `T` families swap the roles of `A0` and `A1`.
    pub fn is_swapped(self) -> bool {
        matches!(self, Family::T4 | Family::T5)
    }

    /// The family whose half matrices this one shares.
    fn halves(self) -> Family {
        match self {
            Family::G4 | Family::T4 => Family::G4,
            Family::G5 | Family::T5 => Family::G5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::G4 => "G4",
            Family::G5 => "G5",
            Family::T4 => "T4",
            Family::T5 => "T5",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G4" => Ok(Family::G4),
            "G5" => Ok(Family::G5),
            "T4" => Ok(Family::T4),
            "T5" => Ok(Family::T5),
            _ => Err(Error::BadParams(format!("unknown family '{s}'"))),
        }
    }
}

/// A family graph together with its eight canonical role blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub graph: Graph,
    pub block_partition: VertexPartition,
    pub family: Family,
    pub a: usize,
    pub b: usize,
}

impl FamilyInstance {
    pub fn block(&self, i: usize) -> &[usize] {
        &self.block_partition.blocks()[i]
    }
}

/// The `b×b` matrix `B`: ones in both corners, `J − I` in the centre and ones
/// along the borders between them. Every row sums to `b − 1`.
pub fn build_b(b: usize) -> Result<RealSymMatrix> {
    if b < 3 {
        return Err(Error::SizeTooSmall(b));
    }
    let last = b - 1;
    Ok(RealSymMatrix::from_upper_fn(b, |i, j| {
        let corner_i = i == 0 || i == last;
        let corner_j = j == 0 || j == last;
        let v = match (corner_i, corner_j) {
            (true, true) => i == j,
            (true, false) | (false, true) => true,
            (false, false) => i != j,
        };
        f64::from(u8::from(v))
    }))
}

#[derive(Debug, Clone, Copy)]
enum Link {
    /// complete bipartite (`J`)
    Full,
    /// perfect matching (`I`); on a diagonal block, a loop at every vertex
    Matching,
    /// the support of `B`
    Bpat,
}

/// Role-block connections in canonical block order.
fn connections(family: Family) -> &'static [(usize, usize, Link)] {
    use Link::*;
    match family {
        Family::G4 => &[
            (0, 1, Full),
            (1, 2, Matching),
            (2, 3, Bpat),
            (1, 4, Matching),
            (3, 6, Matching),
            (4, 5, Matching),
            (5, 6, Bpat),
            (4, 7, Full),
        ],
        Family::G5 => &[
            (0, 1, Full),
            (1, 2, Matching),
            (1, 3, Matching),
            (2, 5, Bpat),
            (3, 6, Bpat),
            (4, 5, Matching),
            (4, 6, Matching),
            (4, 7, Full),
        ],
        Family::T4 => &[
            (1, 1, Matching),
            (3, 3, Matching),
            (4, 4, Matching),
            (6, 6, Matching),
            (0, 4, Full),
            (1, 7, Full),
            (1, 5, Matching),
            (2, 4, Matching),
            (2, 6, Bpat),
            (3, 5, Bpat),
        ],
        Family::T5 => &[
            (2, 2, Bpat),
            (3, 3, Bpat),
            (5, 5, Bpat),
            (6, 6, Bpat),
            (0, 4, Full),
            (1, 7, Full),
            (1, 5, Matching),
            (1, 6, Matching),
            (2, 4, Matching),
            (3, 4, Matching),
        ],
    }
}

fn check_params(a: usize, b: usize) -> Result<()> {
    if a < 1 || b < 3 {
        return Err(Error::BadParams(format!(
            "family parameters need a >= 1 and b >= 3, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

fn block_sizes(a: usize, b: usize) -> [usize; 8] {
    [a, b, b, b, b, b, b, a]
}

/// Canonical role blocks for parameters `(a, b)`.
pub fn canonical_blocks(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut start = 0;
    block_sizes(a, b)
        .iter()
        .map(|&s| {
            let blk = (start..start + s).collect();
            start += s;
            blk
        })
        .collect()
}

/// Builds a family graph edge by edge from its role connections.
pub fn build_family(family: Family, a: usize, b: usize) -> Result<FamilyInstance> {
    check_params(a, b)?;
    let blocks = canonical_blocks(a, b);
    let bmat = build_b(b)?;
    let n = 2 * a + 6 * b;
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for &(p, q, link) in connections(family) {
        let (bp, bq) = (&blocks[p], &blocks[q]);
        let mut join = |u: usize, v: usize| {
            if u == v {
                loops.push(u);
            } else {
                edges.push((u, v));
            }
        };
        match link {
            Link::Full => {
                for &u in bp {
                    for &v in bq {
                        join(u, v);
                    }
                }
            }
            Link::Matching => {
                for (&u, &v) in bp.iter().zip(bq) {
                    join(u, v);
                }
            }
            Link::Bpat => {
                for (i, &u) in bp.iter().enumerate() {
                    for (j, &v) in bq.iter().enumerate() {
                        if bmat.get(i, j) == 1.0 && (p != q || i <= j) {
                            join(u, v);
                        }
                    }
                }
            }
        }
    }
    let graph = Graph::with_loops(n, edges, loops)?.named(format!("{family}({a},{b})"));
    let block_partition = VertexPartition::new(blocks, n)?;
    Ok(FamilyInstance {
        graph,
        block_partition,
        family,
        a,
        b,
    })
}

pub fn build_g4(a: usize, b: usize) -> Result<FamilyInstance> {
    build_family(Family::G4, a, b)
}

pub fn build_g5(a: usize, b: usize) -> Result<FamilyInstance> {
    build_family(Family::G5, a, b)
}

pub fn build_t4(a: usize, b: usize) -> Result<FamilyInstance> {
    build_family(Family::T4, a, b)
}

pub fn build_t5(a: usize, b: usize) -> Result<FamilyInstance> {
    build_family(Family::T5, a, b)
}

/// Half matrices `(A0, A1)` on the four role blocks `(C, X, Y, Z)`.
pub fn half_matrices(family: Family, a: usize, b: usize) -> Result<(RealSymMatrix, RealSymMatrix)> {
    check_params(a, b)?;
    use Block::{Identity as I, Ones as J, Zeros as Z};
    let bb = || Block::Dense(build_b(b).expect("b >= 3").into_inner());
    let (a0, a1) = match family.halves() {
        Family::G4 => (
            vec![
                vec![Z(a, a), J(a, b), Z(a, b), Z(a, b)],
                vec![J(b, a), Z(b, b), I(b), Z(b, b)],
                vec![Z(b, a), I(b), Z(b, b), bb()],
                vec![Z(b, a), Z(b, b), bb(), Z(b, b)],
            ],
            vec![
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b)],
                vec![Z(b, a), Z(b, b), Z(b, b), I(b)],
            ],
        ),
        _ => (
            vec![
                vec![Z(a, a), J(a, b), Z(a, b), Z(a, b)],
                vec![J(b, a), Z(b, b), I(b), I(b)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b)],
            ],
            vec![
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b)],
                vec![Z(b, a), Z(b, b), bb(), Z(b, b)],
                vec![Z(b, a), Z(b, b), Z(b, b), bb()],
            ],
        ),
    };
    Ok((block_compose(&a0)?, block_compose(&a1)?))
}

/// Adjacency via `I₂⊗A0 + σx⊗A1` (or with `A0`, `A1` swapped for `T`
/// families), permuted into canonical block order.
pub fn kron_adjacency(family: Family, a: usize, b: usize) -> Result<RealSymMatrix> {
    let (a0, a1) = half_matrices(family, a, b)?;
    let m = if family.is_swapped() {
        two_copy(&a1, &a0)?
    } else {
        two_copy(&a0, &a1)?
    };
    // kron order is C X Y Z | C' X' Y' Z'; canonical moves C' to the end
    let half = a + 3 * b;
    let perm: Vec<usize> = (0..half).chain(half + a..2 * half).chain(half..half + a).collect();
    Ok(m.permuted(&perm))
}

/// Block order (as canonical block indices) of the relabeled `G4`/`G5`
/// adjacency used by the Schur-complement entropy pipeline. In that order the
/// outer pairs of blocks `{0,1}` and `{6,7}` are eliminated and the inner pairs
/// `{2,3}` and `{4,5}` form the bipartition.
///
/// * `G4`: `C, Y, X, Z, X', Z', C', Y'`
/// * `G5`: `C, X, Y, Z, Y', Z', X', C'`
pub fn schur_block_order(family: Family) -> Result<[usize; 8]> {
    match family {
        Family::G4 => Ok([0, 2, 1, 3, 4, 6, 7, 5]),
        Family::G5 => Ok([0, 1, 2, 3, 5, 6, 4, 7]),
        _ => Err(Error::BadParams(format!("no Schur block order defined for {family}"))),
    }
}

/// Vertex permutation listing canonical vertices in Schur block order:
/// `perm[k]` is the canonical index of the vertex at position `k`.
pub fn schur_vertex_order(inst: &FamilyInstance) -> Result<Vec<usize>> {
    let order = schur_block_order(inst.family)?;
    Ok(order.iter().flat_map(|&blk| inst.block(blk).iter().copied()).collect())
}

/// Dense `B` as a plain nalgebra matrix.
pub fn b_dense(b: usize) -> Result<DMatrix<f64>> {
    Ok(build_b(b)?.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Block::{Identity as I, Ones as J, Zeros as Z};

    #[test]
    fn b_small() {
        assert_eq!(
            build_b(3).unwrap().to_rows(),
            vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]
        );
        assert_eq!(build_b(4).unwrap().row_sums(), vec![3.0; 4]);
        assert_eq!(build_b(2), Err(Error::SizeTooSmall(2)));
    }

    #[test]
    fn b_regular_for_range() {
        for b in 3..=10 {
            let m = build_b(b).unwrap();
            assert!(m.row_sums().iter().all(|&s| s == (b - 1) as f64));
        }
    }

    #[test]
    fn b_squared_identity() {
        for a in 1..=5 {
            let b = a + 2;
            let m = b_dense(b).unwrap();
            let sq = &m * &m;
            let want = DMatrix::from_element(b, b, a as f64) + DMatrix::identity(b, b);
            assert_eq!(sq, want, "a = {a}");
        }
    }

    #[test]
    fn family_sizes_and_regularity() {
        let g4 = build_g4(1, 3).unwrap();
        assert_eq!(g4.graph.n(), 20);
        assert_eq!(g4.graph.regular_degree(), Some(3));
        let g5 = build_g5(1, 3).unwrap();
        assert_eq!(g5.graph.regular_degree(), Some(3));
        assert_ne!(
            g4.graph.edges().collect::<Vec<_>>(),
            g5.graph.edges().collect::<Vec<_>>()
        );
        let g42 = build_g4(2, 4).unwrap();
        assert_eq!(g42.graph.n(), 28);
        assert_eq!(g42.graph.regular_degree(), Some(4));
        assert!(build_g4(0, 3).is_err());
        assert!(build_g5(1, 2).is_err());
    }

    #[test]
    fn t_families() {
        let t4 = build_t4(1, 3).unwrap();
        let t5 = build_t5(1, 3).unwrap();
        assert_eq!(t4.graph.n(), 20);
        assert_eq!(t5.graph.n(), 20);
        assert_ne!(t4.graph, t5.graph);
        assert!(t4.graph.has_loops());
        // the loop replaces the X–X' and Z–Z' matchings, so degrees stay a + 2
        assert_eq!(t4.graph.regular_degree(), Some(3));
        assert_eq!(t5.graph.regular_degree(), Some(3));
        assert_eq!(t4.graph.loops().count(), 12);
    }

    #[test]
    fn edge_build_matches_kron_route() {
        for fam in Family::ALL {
            for (a, b) in [(1, 3), (2, 4), (3, 5), (2, 3)] {
                let inst = build_family(fam, a, b).unwrap();
                let kron = kron_adjacency(fam, a, b).unwrap();
                assert_eq!(inst.graph.adjacency_matrix().max_abs_diff(&kron), 0.0, "{fam}({a},{b})");
            }
        }
    }

    // 8×8 block grids of the canonical relabeled adjacency, transcribed block by block.
    fn canonical_grid(fam: Family, a: usize, b: usize) -> Vec<Vec<Block>> {
        let bb = || Block::Dense(b_dense(b).unwrap());
        match fam {
            Family::G4 => vec![
                vec![Z(a, a), J(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, a)],
                vec![J(b, a), Z(b, b), I(b), Z(b, b), I(b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), bb(), Z(b, b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), Z(b, b), bb(), Z(b, b), Z(b, b), Z(b, b), I(b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b), Z(b, b), I(b), Z(b, b), J(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b), I(b), Z(b, b), bb(), Z(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), I(b), Z(b, b), bb(), Z(b, b), Z(b, a)],
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b), J(a, b), Z(a, b), Z(a, b), Z(a, a)],
            ],
            Family::G5 => vec![
                vec![Z(a, a), J(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, a)],
                vec![J(b, a), Z(b, b), I(b), I(b), Z(b, b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b), Z(b, b), bb(), Z(b, b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b), Z(b, b), Z(b, b), bb(), Z(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b), Z(b, b), I(b), I(b), J(b, a)],
                vec![Z(b, a), Z(b, b), bb(), Z(b, b), I(b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), bb(), I(b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b), J(a, b), Z(a, b), Z(a, b), Z(a, a)],
            ],
            _ => unreachable!(),
        }
    }

    // The relabeled grids used by the entropy pipeline (block sizes follow the
    // permuted order).
    fn schur_grid(fam: Family, a: usize, b: usize) -> Vec<Vec<Block>> {
        let bb = || Block::Dense(b_dense(b).unwrap());
        match fam {
            Family::G4 => vec![
                vec![Z(a, a), Z(a, b), J(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, a), Z(a, b)],
                vec![Z(b, a), Z(b, b), I(b), bb(), Z(b, b), Z(b, b), Z(b, a), Z(b, b)],
                vec![J(b, a), I(b), Z(b, b), Z(b, b), I(b), Z(b, b), Z(b, a), Z(b, b)],
                vec![Z(b, a), bb(), Z(b, b), Z(b, b), Z(b, b), I(b), Z(b, a), Z(b, b)],
                vec![Z(b, a), Z(b, b), I(b), Z(b, b), Z(b, b), Z(b, b), J(b, a), I(b)],
                vec![Z(b, a), Z(b, b), Z(b, b), I(b), Z(b, b), Z(b, b), Z(b, a), bb()],
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b), J(a, b), Z(a, b), Z(a, a), Z(a, b)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b), I(b), bb(), Z(b, a), Z(b, b)],
            ],
            Family::G5 => vec![
                vec![Z(a, a), J(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, a)],
                vec![J(b, a), Z(b, b), I(b), I(b), Z(b, b), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b), bb(), Z(b, b), Z(b, b), Z(b, a)],
                vec![Z(b, a), I(b), Z(b, b), Z(b, b), Z(b, b), bb(), Z(b, b), Z(b, a)],
                vec![Z(b, a), Z(b, b), bb(), Z(b, b), Z(b, b), Z(b, b), I(b), Z(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), bb(), Z(b, b), Z(b, b), I(b), Z(b, a)],
                vec![Z(b, a), Z(b, b), Z(b, b), Z(b, b), I(b), I(b), Z(b, b), J(b, a)],
                vec![Z(a, a), Z(a, b), Z(a, b), Z(a, b), Z(a, b), Z(a, b), J(a, b), Z(a, a)],
            ],
            _ => unreachable!(),
        }
    }

    #[test]
    fn canonical_grids_match_edge_build() {
        for fam in [Family::G4, Family::G5] {
            for (a, b) in [(1, 3), (2, 4), (3, 5)] {
                let grid = block_compose(&canonical_grid(fam, a, b)).unwrap();
                let inst = build_family(fam, a, b).unwrap();
                assert_eq!(grid.max_abs_diff(&inst.graph.adjacency_matrix()), 0.0);
            }
        }
    }

    #[test]
    fn schur_order_reproduces_relabeled_grid() {
        for fam in [Family::G4, Family::G5] {
            for (a, b) in [(1, 3), (2, 4)] {
                let inst = build_family(fam, a, b).unwrap();
                let perm = schur_vertex_order(&inst).unwrap();
                let relabeled = inst.graph.adjacency_matrix().permuted(&perm);
                let grid = block_compose(&schur_grid(fam, a, b)).unwrap();
                assert_eq!(grid.max_abs_diff(&relabeled), 0.0, "{fam}({a},{b})");
            }
        }
        assert!(schur_block_order(Family::T4).is_err());
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("g4".parse::<Family>().unwrap(), Family::G4);
        assert_eq!("T5".parse::<Family>().unwrap(), Family::T5);
        assert!("g6".parse::<Family>().is_err());
    }
}
