//! Undirected simple graphs and the matrices derived from them.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::RealSymMatrix;

/// Undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`. Graphs read from files are
/// always simple. The `T4`/`T5` family constructors place identity and `B`
/// blocks on the diagonal, which puts loops on some vertices; those are kept in
/// a separate set and contribute `1` to the adjacency diagonal and to the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    loops: BTreeSet<usize>,
    name: Option<String>,
}

impl Graph {
    /// Simple graph from an edge list; duplicate pairs (in either orientation) collapse.
    pub fn from_edge_list(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for (u, v) in pairs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges,
            loops: BTreeSet::new(),
            name: None,
        })
    }

    /// Graph with explicit loop vertices in addition to ordinary edges.
    pub fn with_loops(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut g = Self::from_edge_list(n, pairs)?;
        for v in loops {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            g.loops.insert(v);
        }
        Ok(g)
    }

    /// Reads the support of a symmetric 0/1 matrix; diagonal ones become loops.
    pub fn from_adjacency(m: &RealSymMatrix) -> Result<Self> {
        let n = m.dim();
        let mut edges = Vec::new();
        let mut loops = Vec::new();
        for i in 0..n {
            for j in i..n {
                let x = m.get(i, j);
                if x == 1.0 {
                    if i == j {
                        loops.push(i);
                    } else {
                        edges.push((i, j));
                    }
                } else if x != 0.0 {
                    return Err(Error::BadParams(format!("adjacency entry ({i},{j}) = {x} is not 0/1")));
                }
            }
        }
        Self::with_loops(n, edges, loops)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops.iter().copied()
    }

    pub fn has_loops(&self) -> bool {
        !self.loops.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            return self.loops.contains(&u);
        }
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Neighbour lists (loops excluded), each sorted ascending.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Row sums of the adjacency matrix (a loop counts once).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        for &v in &self.loops {
            deg[v] += 1;
        }
        deg
    }

    /// Degrees sorted descending.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn adjacency_matrix(&self) -> RealSymMatrix {
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for &(u, v) in &self.edges {
            rows[u][v] = 1.0;
            rows[v][u] = 1.0;
        }
        for &v in &self.loops {
            rows[v][v] = 1.0;
        }
        RealSymMatrix::from_upper_fn(self.n, |i, j| rows[i][j])
    }

    /// `L = D − A` with `D` the adjacency row sums.
    pub fn laplacian(&self) -> RealSymMatrix {
        let a = self.adjacency_matrix();
        let deg = self.degrees();
        RealSymMatrix::from_upper_fn(self.n, |i, j| {
            if i == j {
                deg[i] as f64 - a.get(i, i)
            } else {
                -a.get(i, j)
            }
        })
    }

    /// BFS distances from `origin`; `None` marks unreachable vertices.
    pub fn distances_from(&self, origin: usize) -> Result<Vec<Option<usize>>> {
        if origin >= self.n {
            return Err(Error::IndexOutOfRange {
                index: origin,
                n: self.n,
            });
        }
        let adj = self.neighbors();
        let mut dist = vec![None; self.n];
        dist[origin] = Some(0);
        let mut queue = VecDeque::from([origin]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// All-pairs BFS distances.
    pub fn distance_table(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n)
            .map(|o| self.distances_from(o).expect("origin in range"))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.distances_from(0)
            .map(|d| d.iter().all(Option::is_some))
            .unwrap_or(false)
    }

    /// Largest finite distance between any two vertices.
    pub fn diameter(&self) -> usize {
        self.distance_table()
            .iter()
            .flat_map(|row| row.iter().flatten())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Matrix with a one wherever the shortest-path distance equals `i`.
    /// Unreachable pairs never match.
    pub fn distance_adjacency(&self, i: usize) -> RealSymMatrix {
        let table = self.distance_table();
        RealSymMatrix::from_upper_fn(self.n, |a, b| f64::from(u8::from(table[a][b] == Some(i))))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let mut g = Self::with_loops(
            self.n,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.loops.iter().map(|&v| perm[v]),
        )?;
        g.name = self.name.clone();
        Ok(g)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for {n} vertices",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::BadParams(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Ordered list of disjoint, non-empty vertex blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Validates blocks against a graph on `n` vertices. Blocks need not cover
    /// every vertex.
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock(b));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::BadPartition(format!(
                        "vertex {v} appears in more than one block"
                    )));
                }
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Concatenation of the blocks with indices in `range`, in block order.
    pub fn union_of(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| range.contains(i))
            .flat_map(|(_, b)| b.iter().copied())
            .collect()
    }

    pub fn covers(&self, n: usize) -> bool {
        self.blocks.iter().map(Vec::len).sum::<usize>() == n
    }

    /// Maps every vertex through `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&v| perm[v]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Graph {
        Graph::from_edge_list(2, [(0, 1)]).unwrap()
    }

    fn p3() -> Graph {
        Graph::from_edge_list(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn edge_list_basics() {
        assert_eq!(k2().degrees(), vec![1, 1]);
        let single = Graph::from_edge_list(1, []).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(single.edge_count(), 0);
        let dup = Graph::from_edge_list(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            Graph::from_edge_list(2, [(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(Graph::from_edge_list(2, [(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn matrices_of_small_graphs() {
        assert_eq!(k2().adjacency_matrix().to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(k2().laplacian().to_rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let single = Graph::from_edge_list(1, []).unwrap();
        assert_eq!(single.adjacency_matrix().to_rows(), vec![vec![0.0]]);
        assert_eq!(single.laplacian().to_rows(), vec![vec![0.0]]);
    }

    #[test]
    fn distance_matrices() {
        assert_eq!(k2().distance_adjacency(1), k2().adjacency_matrix());
        assert_eq!(p3().distance_adjacency(0), RealSymMatrix::identity(3));
        let a2 = p3().distance_adjacency(2);
        assert_eq!(
            a2.to_rows(),
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
        assert_eq!(p3().distance_adjacency(7), RealSymMatrix::zeros(3));
    }

    #[test]
    fn disconnected_distances_are_unreachable() {
        let g = Graph::from_edge_list(3, [(0, 1)]).unwrap();
        assert_eq!(g.distances_from(0).unwrap(), vec![Some(0), Some(1), None]);
        assert!(!g.is_connected());
        // unreachable pairs are not "distance 0"
        assert_eq!(g.distance_adjacency(0), RealSymMatrix::identity(3));
    }

    #[test]
    fn loops_count_in_degree_not_laplacian() {
        let g = Graph::with_loops(2, [(0, 1)], [0]).unwrap();
        assert_eq!(g.degrees(), vec![2, 1]);
        assert_eq!(g.laplacian().row_sums(), vec![0.0, 0.0]);
        assert_eq!(Graph::from_adjacency(&g.adjacency_matrix()).unwrap(), g);
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(vec![vec![0], vec![1, 2]], 3).unwrap().covers(3));
        assert_eq!(
            VertexPartition::new(vec![vec![0], vec![]], 3),
            Err(Error::EmptyBlock(1))
        );
        assert!(matches!(
            VertexPartition::new(vec![vec![0, 1], vec![1]], 3),
            Err(Error::BadPartition(_))
        ));
        assert!(VertexPartition::new(vec![vec![3]], 3).is_err());
    }

    #[test]
    fn permutation_checks() {
        assert!(p3().permute(&[0, 0, 1]).is_err());
        let q = p3().permute(&[2, 0, 1]).unwrap();
        assert!(q.has_edge(2, 0) && q.has_edge(0, 1));
    }
}
