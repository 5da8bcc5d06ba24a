//! Dense symmetric matrices and block assembly.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real symmetric matrix. The lower triangle always mirrors the upper
/// triangle bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymMatrix(DMatrix<f64>);

/// Relative asymmetry accepted by [`RealSymMatrix::from_dmatrix`] before the
/// upper triangle is mirrored.
const SYMMETRY_TOL: f64 = 1e-12;

impl RealSymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Builds from the upper triangle of `f`; `f(i, j)` is only called for `i <= j`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    /// Accepts a matrix that is symmetric up to rounding and mirrors its upper
    /// triangle.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = asymmetry(&m);
        let scale = m.amax().max(1.0);
        if dev > SYMMETRY_TOL * scale {
            return Err(Error::NonSymmetric(dev));
        }
        let n = m.nrows();
        Ok(Self::from_upper_fn(n, |i, j| m[(i, j)]))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in {n}-row matrix",
                bad.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_upper_fn(idx.len(), |i, j| self.0[(idx[i], idx[j])])
    }

    /// Rectangular block with the given row and column indices.
    pub fn cross_block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.0[(rows[i], cols[j])])
    }

    /// `new[i][j] = old[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.principal(perm)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.0 - &other.0).amax()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(Self(&self.0 + &other.0))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.0.row_iter().map(|r| r.sum()).collect()
    }
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

/// One cell of a block layout.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    /// `Z_{r,c}`
    Zeros(usize, usize),
    /// `J_{r,c}` (all ones)
    Ones(usize, usize),
    /// `I_m`
    Identity(usize),
    Dense(DMatrix<f64>),
}

impl Block {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Block::Zeros(r, c) | Block::Ones(r, c) => (*r, *c),
            Block::Identity(m) => (*m, *m),
            Block::Dense(d) => (d.nrows(), d.ncols()),
        }
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        match self {
            Block::Zeros(..) => 0.0,
            Block::Ones(..) => 1.0,
            Block::Identity(_) => f64::from(u8::from(i == j)),
            Block::Dense(d) => d[(i, j)],
        }
    }
}

/// Assembles a square grid of blocks into one symmetric matrix.
///
/// Every block in a grid row must share a height and every block in a grid
/// column a width; the assembled matrix must be exactly symmetric.
pub fn block_compose(layout: &[Vec<Block>]) -> Result<RealSymMatrix> {
    let k = layout.len();
    if let Some((r, row)) = layout.iter().enumerate().find(|(_, row)| row.len() != k) {
        return Err(Error::DimensionMismatch(format!(
            "grid row {r} has {} blocks, expected {k}",
            row.len()
        )));
    }
    let mut heights = vec![0usize; k];
    let mut widths = vec![0usize; k];
    for (r, row) in layout.iter().enumerate() {
        heights[r] = row[0].shape().0;
        for (c, b) in row.iter().enumerate() {
            let (h, w) = b.shape();
            if h != heights[r] {
                return Err(Error::DimensionMismatch(format!(
                    "block ({r},{c}) has height {h}, row expects {}",
                    heights[r]
                )));
            }
            if r == 0 {
                widths[c] = w;
            } else if w != widths[c] {
                return Err(Error::DimensionMismatch(format!(
                    "block ({r},{c}) has width {w}, column expects {}",
                    widths[c]
                )));
            }
        }
    }
    if heights != widths {
        return Err(Error::DimensionMismatch(format!(
            "row heights {heights:?} differ from column widths {widths:?}"
        )));
    }
    let n: usize = heights.iter().sum();
    let mut m = DMatrix::zeros(n, n);
    let mut r0 = 0;
    for (r, row) in layout.iter().enumerate() {
        let mut c0 = 0;
        for (c, b) in row.iter().enumerate() {
            for i in 0..heights[r] {
                for j in 0..widths[c] {
                    m[(r0 + i, c0 + j)] = b.entry(i, j);
                }
            }
            c0 += widths[c];
        }
        r0 += heights[r];
    }
    let dev = asymmetry(&m);
    if dev != 0.0 {
        return Err(Error::AsymmetricLayout(format!("max deviation {dev}")));
    }
    Ok(RealSymMatrix(m))
}

/// `I_2 ⊗ diag + σ_x ⊗ off`, i.e. `[[diag, off], [off, diag]]`.
pub fn two_copy(diag: &RealSymMatrix, off: &RealSymMatrix) -> Result<RealSymMatrix> {
    if diag.dim() != off.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", diag.dim(), off.dim())));
    }
    let id2 = DMatrix::<f64>::identity(2, 2);
    let sx = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let m = id2.kronecker(diag.as_matrix()) + sx.kronecker(off.as_matrix());
    RealSymMatrix::from_dmatrix(m)
}
