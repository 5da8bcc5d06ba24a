//! Antisymmetric `a`-particle walks and the 8×8 fermionic quotients of the
//! `G4`/`G5`/`T4`/`T5` families.
//!
//! Basis states are the `a`-subsets of the vertices in lexicographic order,
//! each kept as a sorted occupation list. Moving a particle from `v` to an
//! empty site `w` picks up the sign `(−1)^k`, `k` the number of occupied sites
//! strictly between `v` and `w`. A loop at `v` adds `+1` to the diagonal of
//! every subset containing `v`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::{Family, FamilyInstance};
use crate::graph::Graph;
use crate::matrix::RealSymMatrix;

pub const DEFAULT_NNZ_CAP: u128 = 2_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Debug, Clone)]
pub struct FermionSpace {
    n: usize,
    a: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn combinations(n: usize, a: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..a).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..a).rev().find(|&i| cur[i] < n - a + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..a {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

impl FermionSpace {
    pub fn new(n: usize, a: usize) -> Result<Self> {
        if a == 0 || a > n {
            return Err(Error::BadParticleCount { a, n });
        }
        let basis = combinations(n, a);
        let index = basis.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self { n, a, basis, index })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn particles(&self) -> usize {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        self.index.get(subset).copied()
    }

    /// Moves the particle at `v` to `w`. `None` when `v` is empty or `w` is
    /// occupied.
    pub fn hop(&self, subset: &[usize], v: usize, w: usize) -> Option<(usize, f64)> {
        if !subset.contains(&v) || subset.contains(&w) {
            return None;
        }
        let (lo, hi) = (v.min(w), v.max(w));
        let between = subset.iter().filter(|&&x| lo < x && x < hi).count();
        let mut target: Vec<usize> = subset.iter().copied().filter(|&x| x != v).collect();
        let pos = target.partition_point(|&x| x < w);
        target.insert(pos, w);
        let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
        Some((self.index[&target], sign))
    }
}

/// Row-compressed symmetric operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSym {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] += v;
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.to_dense();
        m == m.transpose()
    }
}

#[derive(Debug, Clone)]
pub struct FermionOperator {
    pub space: FermionSpace,
    pub op: SparseSym,
}

/// Summed one-body hop restricted to the antisymmetric `a`-particle sector.
pub fn fermion_hop_operator(g: &Graph, a: usize, cap: u128, exec: Execution) -> Result<FermionOperator> {
    let n = g.n();
    if a == 0 || a > n {
        return Err(Error::BadParticleCount { a, n });
    }
    let max_deg = g.degrees().into_iter().max().unwrap_or(0) as u128;
    let estimated = binomial(n, a) * (1 + a as u128 * max_deg);
    if estimated > cap {
        return Err(Error::CapExceeded { estimated, cap });
    }
    let space = FermionSpace::new(n, a)?;
    let nbrs = g.neighbors();
    let loops: Vec<bool> = {
        let mut l = vec![false; n];
        for v in g.loops() {
            l[v] = true;
        }
        l
    };
    let rows = exec.map(space.basis(), |s| {
        let mut row: Vec<(usize, f64)> = Vec::new();
        let diag = s.iter().filter(|&&v| loops[v]).count();
        if diag > 0 {
            row.push((space.index[s], diag as f64));
        }
        for &v in s {
            for &w in &nbrs[v] {
                if let Some(t) = space.hop(s, v, w) {
                    row.push(t);
                }
            }
        }
        row.sort_by_key(|&(j, _)| j);
        row
    });
    Ok(FermionOperator {
        op: SparseSym { dim: space.dim(), rows },
        space,
    })
}

/// How the eighth basis vector (the far `a`-cloud) is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Phi7Convention {
    /// One particle of the first cloud transferred into the far cloud, like
    /// the six intermediate vectors. Closes for every `a`.
    #[default]
    SingleTransfer,
    /// All `a` particles on the far cloud. Coincides with the above for
    /// `a = 1`; for `a ≥ 2` the span is not invariant.
    Slater,
}

/// The eight basis vectors `φ_0 … φ_7` over the canonical role blocks.
pub fn g45_fermionic_vectors(
    inst: &FamilyInstance,
    space: &FermionSpace,
    convention: Phi7Convention,
) -> Result<Vec<Vec<f64>>> {
    let dim = space.dim();
    let cloud: Vec<usize> = inst.block(0).to_vec();
    let slater = |s: &[usize]| {
        let mut v = vec![0.0; dim];
        v[space.index_of(s).expect("subset in basis")] = 1.0;
        v
    };
    let transfer = |blk: &[usize]| {
        let mut v = vec![0.0; dim];
        for &k in &cloud {
            for &j in blk {
                if let Some((idx, sign)) = space.hop(&cloud, k, j) {
                    v[idx] += sign;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    };
    let mut out = vec![slater(&cloud)];
    for l in 1..7 {
        out.push(transfer(inst.block(l)));
    }
    out.push(match convention {
        Phi7Convention::SingleTransfer => transfer(inst.block(7)),
        Phi7Convention::Slater => slater(inst.block(7)),
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermiQuotient {
    pub matrix: RealSymMatrix,
    /// `max |H·Φ − Φ·Q|`.
    pub residual: f64,
    /// `max |ΦᵀΦ − I|`.
    pub orthonormality_error: f64,
    pub basis_vectors: Vec<Vec<f64>>,
}

pub fn fermionic_quotient(
    inst: &FamilyInstance,
    convention: Phi7Convention,
    cap: u128,
    exec: Execution,
) -> Result<FermiQuotient> {
    let fo = fermion_hop_operator(&inst.graph, inst.a, cap, exec)?;
    let phis = g45_fermionic_vectors(inst, &fo.space, convention)?;
    let images: Vec<Vec<f64>> = exec.map(&phis, |p| fo.op.apply(p));
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let q = RealSymMatrix::from_upper_fn(8, |i, j| 0.5 * (dot(&phis[i], &images[j]) + dot(&phis[j], &images[i])));
    let mut residual = 0.0f64;
    for (j, img) in images.iter().enumerate() {
        for (r, &y) in img.iter().enumerate() {
            let proj: f64 = (0..8).map(|i| phis[i][r] * q.get(i, j)).sum();
            residual = residual.max((y - proj).abs());
        }
    }
    let mut orth = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let want = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((dot(&phis[i], &phis[j]) - want).abs());
        }
    }
    Ok(FermiQuotient {
        matrix: q,
        residual,
        orthonormality_error: orth,
        basis_vectors: phis,
    })
}

/// The 8×8 strata-basis matrices as printed for each family. The `T5`
/// display's row 5 carries a stray 1 in column 4 that contradicts both the
/// symmetric entry and the listed action of `A` on `φ_5`; it is dropped here.
pub fn reference_fermi_quotient(family: Family, a: usize, b: usize) -> RealSymMatrix {
    let r = ((a * b) as f64).sqrt();
    let m = (b - 1) as f64;
    let rows: [[f64; 8]; 8] = match family {
        Family::G4 => [
            [0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [r, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, m, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, m, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, r],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, m, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, m, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, r, 0.0, 0.0, 0.0],
        ],
        Family::G5 => [
            [0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [r, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, m, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, m, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, r],
            [0.0, 0.0, m, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, m, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, r, 0.0, 0.0, 0.0],
        ],
        Family::T4 => [
            [0.0, 0.0, 0.0, 0.0, r, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, r],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, m, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, m, 0.0, 0.0],
            [r, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, m, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, m, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ],
        Family::T5 => [
            [0.0, 0.0, 0.0, 0.0, r, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, r],
            [0.0, 0.0, m, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, m, 1.0, 0.0, 0.0, 0.0],
            [r, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, m, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, m, 0.0],
            [0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ],
    };
    RealSymMatrix::from_upper_fn(8, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_family;
    use crate::strata::quotient;

    #[test]
    fn binomials() {
        assert_eq!(binomial(32, 2), 496);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn lexicographic_basis() {
        let s = FermionSpace::new(4, 2).unwrap();
        assert_eq!(
            s.basis(),
            &[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert!(FermionSpace::new(3, 0).is_err());
        assert!(FermionSpace::new(3, 4).is_err());
    }

    #[test]
    fn hop_signs() {
        let s = FermionSpace::new(4, 2).unwrap();
        // 0 -> 3 passes the particle at 2
        let (t, sign) = s.hop(&[0, 2], 0, 3).unwrap();
        assert_eq!((s.basis()[t].clone(), sign), (vec![2, 3], -1.0));
        let (_, sign) = s.hop(&[0, 1], 1, 3).unwrap();
        assert_eq!(sign, 1.0);
        assert!(s.hop(&[0, 1], 0, 1).is_none());
    }

    #[test]
    fn one_particle_is_adjacency() {
        let inst = build_family(Family::G4, 1, 3).unwrap();
        let fo = fermion_hop_operator(&inst.graph, 1, DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
        assert_eq!(&fo.op.to_dense(), inst.graph.adjacency_matrix().as_matrix());
        let t4 = build_family(Family::T4, 1, 3).unwrap();
        let fo = fermion_hop_operator(&t4.graph, 1, DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
        assert_eq!(&fo.op.to_dense(), t4.graph.adjacency_matrix().as_matrix());
    }

    #[test]
    fn pauli_blocked_pair() {
        let k2 = Graph::from_edge_list(2, [(0, 1)]).unwrap();
        let fo = fermion_hop_operator(&k2, 2, DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
        assert_eq!(fo.op.dim(), 1);
        assert_eq!(fo.op.nnz(), 0);
    }

    #[test]
    fn caps_and_counts() {
        let k2 = Graph::from_edge_list(2, [(0, 1)]).unwrap();
        assert!(matches!(
            fermion_hop_operator(&k2, 3, DEFAULT_NNZ_CAP, Execution::Sequential),
            Err(Error::BadParticleCount { .. })
        ));
        let inst = build_family(Family::G4, 3, 5).unwrap();
        assert!(matches!(
            fermion_hop_operator(&inst.graph, 3, 1000, Execution::Sequential),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn two_particle_operator_symmetric() {
        let inst = build_family(Family::T5, 2, 4).unwrap();
        let fo = fermion_hop_operator(&inst.graph, 2, DEFAULT_NNZ_CAP, Execution::Parallel).unwrap();
        assert_eq!(fo.op.dim(), 378);
        assert!(fo.op.is_symmetric());
    }

    #[test]
    fn uniform_block_apply() {
        // every vertex of Y has three neighbours, all outside Y
        let inst = build_family(Family::G4, 1, 3).unwrap();
        let fo = fermion_hop_operator(&inst.graph, 1, DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
        let mut x = vec![0.0; 20];
        for &v in inst.block(2) {
            x[v] = 1.0;
        }
        let y = fo.op.apply(&x);
        let mass: f64 = y.iter().sum();
        assert_eq!(mass, 9.0);
        assert!(inst.block(2).iter().all(|&v| y[v] == 0.0));
    }

    #[test]
    fn single_particle_vectors() {
        let inst = build_family(Family::G4, 1, 3).unwrap();
        let space = FermionSpace::new(20, 1).unwrap();
        let phis = g45_fermionic_vectors(&inst, &space, Phi7Convention::SingleTransfer).unwrap();
        assert_eq!(phis[0][0], 1.0);
        for &v in inst.block(1) {
            assert!((phis[1][v] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        let slater = g45_fermionic_vectors(&inst, &space, Phi7Convention::Slater).unwrap();
        assert_eq!(phis, slater);
    }

    #[test]
    fn printed_quotients_all_families() {
        for fam in Family::ALL {
            for (a, b) in [(1, 3), (2, 4)] {
                let inst = build_family(fam, a, b).unwrap();
                let fq = fermionic_quotient(
                    &inst,
                    Phi7Convention::SingleTransfer,
                    DEFAULT_NNZ_CAP,
                    Execution::Parallel,
                )
                .unwrap();
                assert!(fq.residual < 1e-10, "{fam}({a},{b}) residual {}", fq.residual);
                assert!(fq.orthonormality_error < 1e-12);
                let want = reference_fermi_quotient(fam, a, b);
                assert!(fq.matrix.max_abs_diff(&want) < 1e-10, "{fam}({a},{b})");
            }
        }
    }

    #[test]
    fn slater_far_cloud_does_not_close() {
        let inst = build_family(Family::G4, 2, 4).unwrap();
        let fq = fermionic_quotient(&inst, Phi7Convention::Slater, DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
        assert!(fq.residual > 0.1);
        assert!(fq.orthonormality_error < 1e-12);
    }

    #[test]
    fn one_particle_matches_block_quotient() {
        for fam in Family::ALL {
            let inst = build_family(fam, 1, 3).unwrap();
            let fq =
                fermionic_quotient(&inst, Phi7Convention::default(), DEFAULT_NNZ_CAP, Execution::Sequential).unwrap();
            let q = quotient(&inst.graph, &inst.block_partition, 1e-10).unwrap();
            assert!(fq.matrix.max_abs_diff(&q.matrix) <= 1e-12);
        }
    }

    #[test]
    fn printed_pairs_differ() {
        let gap =
            |x: Family, y: Family| reference_fermi_quotient(x, 1, 3).max_abs_diff(&reference_fermi_quotient(y, 1, 3));
        assert!(gap(Family::G4, Family::G5) >= 1.0);
        assert!(gap(Family::T4, Family::T5) >= 1.0);
    }
}
