//! Entanglement entropy of the coupled-oscillator ground state.
//!
//! A graph with coupling `g` defines the potential `V = I + 2gL`. For a split
//! of the oscillators into parts `A` and `B`, write `V = [[A, B], [Bᵀ, C]]`,
//! diagonalize `A` and `C`, rescale both sides to unit frequencies and take
//! the singular values `d_i` of the rescaled coupling block. Each `d_i` gives
//! `ν_i = (1 − d_i²)^(−1/2)` and a mode entropy
//! `S(ν) = ((ν+1)/2)·log((ν+1)/2) − ((ν−1)/2)·log((ν−1)/2)`.
//!
//! For the `G4`/`G5` families the outer role blocks are first removed by
//! Schur complement, giving an effective potential on the four inner blocks.
//! That reduced matrix is used as is; it is not claimed to equal a partial
//! trace of the full ground state, and [`g45_entropy_experiment`] also reports
//! the entropy of the full potential for comparison.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{build_family, schur_vertex_order, Family};
use crate::graph::Graph;
use crate::matrix::RealSymMatrix;
use crate::spectral::sym_eig_vectors;

/// Singular values this close to 1 make `ν` blow up.
const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" | "E" => Ok(LogBase::E),
            _ => Err(Error::Parse(format!("log base must be 2 or e, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNetwork {
    pub v: RealSymMatrix,
    pub coupling: f64,
}

pub fn potential_matrix(g: &Graph, coupling: f64) -> Result<GaussianNetwork> {
    if coupling < 0.0 || coupling.is_nan() {
        return Err(Error::NegativeCoupling(coupling));
    }
    let v = RealSymMatrix::identity(g.n()).add(&g.laplacian().scaled(2.0 * coupling))?;
    Ok(GaussianNetwork { v, coupling })
}

fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    m.nrows() == 0 || m.clone().cholesky().is_some()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurReduction {
    pub matrix: RealSymMatrix,
    /// Indices of `v` kept, in the row order of `matrix`.
    pub kept: Vec<usize>,
}

/// `V_SS − V_SE·V_EE⁻¹·V_ES` on the kept indices `S` (ascending).
pub fn schur_eliminate(v: &RealSymMatrix, eliminate: &[usize]) -> Result<SchurReduction> {
    let n = v.dim();
    let mut drop = vec![false; n];
    for &e in eliminate {
        if e >= n {
            return Err(Error::IndexOutOfRange { index: e, n });
        }
        drop[e] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !drop[i]).collect();
    let elim: Vec<usize> = (0..n).filter(|&i| drop[i]).collect();
    if kept.is_empty() {
        return Err(Error::BadPartition("Schur elimination would remove every index".into()));
    }
    if elim.is_empty() {
        return Ok(SchurReduction {
            matrix: v.clone(),
            kept,
        });
    }
    let vss = v.cross_block(&kept, &kept);
    let vse = v.cross_block(&kept, &elim);
    let vee = v.cross_block(&elim, &elim);
    let x = vee.lu().solve(&vse.transpose()).ok_or(Error::SingularBlock)?;
    let reduced = vss - vse * x;
    Ok(SchurReduction {
        matrix: RealSymMatrix::from_dmatrix(reduced)?,
        kept,
    })
}

/// The three factors `[[I,0],[V₂₁V₁₁⁻¹,I]] · diag(V₁₁, Ṽ₂₂) · [[I,V₁₁⁻¹V₁₂],[0,I]]`
/// of `v` split after its first `k` rows.
pub fn block_ldl_factors(v: &RealSymMatrix, k: usize) -> Result<[DMatrix<f64>; 3]> {
    let n = v.dim();
    if k == 0 || k >= n {
        return Err(Error::BadPartition(format!("split point {k} for dimension {n}")));
    }
    let first: Vec<usize> = (0..k).collect();
    let rest: Vec<usize> = (k..n).collect();
    let v11 = v.cross_block(&first, &first);
    let v12 = v.cross_block(&first, &rest);
    let inv_v12 = v11.clone().lu().solve(&v12).ok_or(Error::SingularBlock)?;
    let reduced = schur_eliminate(v, &first)?.matrix.into_inner();
    let m = n - k;
    let mut lower = DMatrix::identity(n, n);
    lower.view_mut((k, 0), (m, k)).copy_from(&inv_v12.transpose());
    let mut middle = DMatrix::zeros(n, n);
    middle.view_mut((0, 0), (k, k)).copy_from(&v11);
    middle.view_mut((k, k), (m, m)).copy_from(&reduced);
    let upper = lower.transpose();
    Ok([lower, middle, upper])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementSpectrum {
    /// Singular values, descending.
    pub d: Vec<f64>,
    pub nu: Vec<f64>,
    pub mode_entropies: Vec<f64>,
    pub total: f64,
    pub log_base: LogBase,
}

/// Entropy of one mode with coupling parameter `d` (sign ignored).
pub fn mode_entropy(d: f64, base: LogBase) -> Result<f64> {
    let d = d.abs();
    if !(d < 1.0) {
        return Err(Error::OutOfRange(d));
    }
    let nu = (1.0 - d * d).powf(-0.5);
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * base.log(x) };
    Ok(xlogx((nu + 1.0) / 2.0) - xlogx((nu - 1.0) / 2.0))
}

fn unit_frequency_frame(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let e = sym_eig_vectors(&RealSymMatrix::from_dmatrix(m.clone())?)?;
    if e.spectrum.values.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let mut frame = e.vectors;
    for (j, &w) in e.spectrum.values.iter().enumerate() {
        frame.column_mut(j).scale_mut(w.powf(-0.5));
    }
    Ok(frame)
}

pub fn bipartite_entropy(v: &RealSymMatrix, part_a: &[usize], base: LogBase) -> Result<EntanglementSpectrum> {
    let n = v.dim();
    let mut in_a = vec![false; n];
    for &i in part_a {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if std::mem::replace(&mut in_a[i], true) {
            return Err(Error::BadPartition(format!("index {i} repeated in part A")));
        }
    }
    let part_b: Vec<usize> = (0..n).filter(|&i| !in_a[i]).collect();
    if part_a.is_empty() || part_b.is_empty() {
        return Err(Error::BadPartition("part A must be a non-empty proper subset".into()));
    }
    if !is_positive_definite(v.as_matrix()) {
        return Err(Error::NotPositiveDefinite);
    }
    let fa = unit_frequency_frame(&v.cross_block(part_a, part_a))?;
    let fc = unit_frequency_frame(&v.cross_block(&part_b, &part_b))?;
    let coupling = fa.transpose() * v.cross_block(part_a, &part_b) * fc;
    let mut d: Vec<f64> = coupling.singular_values().iter().copied().collect();
    d.sort_by(|x, y| y.total_cmp(x));
    if let Some((index, &dmax)) = d.iter().enumerate().find(|(_, &x)| x >= 1.0 - DEGENERATE_GAP) {
        return Err(Error::DegenerateMode { index, d: dmax });
    }
    let nu = d.iter().map(|x| (1.0 - x * x).powf(-0.5)).collect();
    let mode_entropies = d.iter().map(|&x| mode_entropy(x, base)).collect::<Result<Vec<_>>>()?;
    let total = mode_entropies.iter().sum();
    Ok(EntanglementSpectrum {
        d,
        nu,
        mode_entropies,
        total,
        log_base: base,
    })
}

fn check_family_regime(family: Family, a: usize, b: usize) -> Result<()> {
    if !matches!(family, Family::G4 | Family::G5) {
        return Err(Error::BadParams(format!("no closed-form entropy data for {family}")));
    }
    if a < 1 || b != a + 2 {
        return Err(Error::BadParams(format!(
            "closed forms hold only for b = a + 2, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Closed-form `|d_i|` for `G4`/`G5` with `b = a + 2`, descending.
///
/// With `c = 1 + 2gb`, the reduced inner block has eigenvalues
/// `{ab + b, ab − b + 2, 2 × (b−1), 0 × (b−1)}` for `G4`. The `G5` list is
/// printed with signs; only `d²` enters the entropy, so magnitudes are used.
pub fn g45_reference_d(family: Family, a: usize, b: usize, g: f64) -> Result<Vec<f64>> {
    check_family_regime(family, a, b)?;
    if g < 0.0 || g.is_nan() {
        return Err(Error::NegativeCoupling(g));
    }
    let (af, bf) = (a as f64, b as f64);
    let c = 1.0 + 2.0 * g * bf;
    let mut d = match family {
        Family::G4 => {
            let mut mu = vec![af * bf + bf, af * bf - bf + 2.0];
            mu.extend(std::iter::repeat_n(2.0, b - 1));
            mu.extend(std::iter::repeat_n(0.0, b - 1));
            mu.iter()
                .map(|m| 2.0 * g / (c - 4.0 * g * g / c * m))
                .collect::<Vec<_>>()
        }
        _ => {
            let l1 = (4.0 * g * g * (af * bf + 2.0) * c - c.powi(3)) / (4.0 * g * g * af * bf - c * c);
            let l2 = c - 8.0 * g * g / c;
            let mut d = vec![2.0 * g * (bf - 1.0) / l1];
            d.extend(std::iter::repeat_n(2.0 * g / l2, b - 1));
            d.push(2.0 * g * (bf - 1.0) / c);
            d.extend(std::iter::repeat_n(2.0 * g / c, b - 1));
            d
        }
    };
    d.iter_mut().for_each(|x| *x = x.abs());
    d.sort_by(|x, y| y.total_cmp(x));
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct G45Experiment {
    pub family: Family,
    pub a: usize,
    pub b: usize,
    pub coupling: f64,
    pub spectrum: EntanglementSpectrum,
    pub reference_d: Vec<f64>,
    pub max_reference_gap: f64,
    pub matches_reference: bool,
    /// Entropy of the unreduced potential between the two halves of the
    /// Schur block order.
    pub direct_total: f64,
}

const REFERENCE_TOL: f64 = 1e-10;

/// Eliminates the two outer block pairs of the Schur order and measures the
/// entropy between the two remaining inner pairs.
pub fn g45_entropy_experiment(family: Family, a: usize, b: usize, g: f64, base: LogBase) -> Result<G45Experiment> {
    check_family_regime(family, a, b)?;
    let inst = build_family(family, a, b)?;
    let order = schur_vertex_order(&inst)?;
    let v = potential_matrix(&inst.graph, g)?.v.permuted(&order);
    let sizes = [a, b, b, b, b, b, b, a];
    let mut offsets = [0usize; 9];
    for i in 0..8 {
        offsets[i + 1] = offsets[i] + sizes[i];
    }
    let range = |lo: usize, hi: usize| offsets[lo]..offsets[hi];
    let eliminate: Vec<usize> = range(0, 2).chain(range(6, 8)).collect();
    let reduced = schur_eliminate(&v, &eliminate)?;
    let side_a: Vec<usize> = (0..2 * b).collect();
    let spectrum = bipartite_entropy(&reduced.matrix, &side_a, base)?;
    let reference_d = g45_reference_d(family, a, b, g)?;
    let max_reference_gap = if spectrum.d.len() == reference_d.len() {
        spectrum
            .d
            .iter()
            .zip(&reference_d)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let half: Vec<usize> = range(0, 4).collect();
    let direct_total = bipartite_entropy(&v, &half, base)?.total;
    Ok(G45Experiment {
        family,
        a,
        b,
        coupling: g,
        spectrum,
        reference_d,
        max_reference_gap,
        matches_reference: max_reference_gap <= REFERENCE_TOL,
        direct_total,
    })
}

/// Serialized form of one entropy computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub graph: String,
    #[serde(rename = "partA")]
    pub part_a: Vec<usize>,
    pub g: f64,
    pub log_base: LogBase,
    pub d: Vec<f64>,
    pub nu: Vec<f64>,
    pub mode_entropies: Vec<f64>,
    pub total: f64,
}

impl EntropyReport {
    pub fn new(graph: impl Into<String>, part_a: Vec<usize>, g: f64, s: EntanglementSpectrum) -> Self {
        Self {
            graph: graph.into(),
            part_a,
            g,
            log_base: s.log_base,
            d: s.d,
            nu: s.nu,
            mode_entropies: s.mode_entropies,
            total: s.total,
        }
    }
}

/// Entropy of a graph's ground state between `part_a` and the rest.
pub fn graph_entropy(g: &Graph, coupling: f64, part_a: &[usize], base: LogBase) -> Result<EntanglementSpectrum> {
    bipartite_entropy(&potential_matrix(g, coupling)?.v, part_a, base)
}
