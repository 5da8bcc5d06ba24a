//! Continuous-time quantum walks `ψ(t) = exp(−iHt)·ψ(0)`.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{Graph, VertexPartition};
use crate::matrix::RealSymMatrix;
use crate::spectral::sym_eig_vectors;
use crate::strata::{bfs_stratification, project, DEFAULT_CLOSURE_TOL};

const NORM_TOL: f64 = 1e-10;
/// Largest allowed gap between full-space and quotient-space probabilities.
pub const DUAL_PATH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub entries: Vec<Complex64>,
    pub time: f64,
}

impl AmplitudeVector {
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn block_probabilities(&self, p: &VertexPartition) -> Vec<f64> {
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|&v| self.entries[v].norm_sqr()).sum())
            .collect()
    }
}

/// `exp(−iHt)` through one eigendecomposition of `H`, reused across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(h: &RealSymMatrix) -> Result<Self> {
        let e = sym_eig_vectors(h)?;
        Ok(Self {
            values: e.spectrum.values,
            vectors: e.vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn evolve(&self, t: f64, init: &[Complex64]) -> Result<AmplitudeVector> {
        let n = self.dim();
        if init.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} for {n}×{n} Hamiltonian",
                init.len()
            )));
        }
        let norm: f64 = init.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedInput(norm));
        }
        let re = DVector::from_iterator(n, init.iter().map(|z| z.re));
        let im = DVector::from_iterator(n, init.iter().map(|z| z.im));
        let vt = self.vectors.transpose();
        let (cr, ci) = (&vt * re, &vt * im);
        let mut rot_re = DVector::zeros(n);
        let mut rot_im = DVector::zeros(n);
        for k in 0..n {
            let phase = Complex64::from_polar(1.0, -self.values[k] * t);
            let c = Complex64::new(cr[k], ci[k]) * phase;
            rot_re[k] = c.re;
            rot_im[k] = c.im;
        }
        let out_re = &self.vectors * rot_re;
        let out_im = &self.vectors * rot_im;
        Ok(AmplitudeVector {
            entries: (0..n).map(|i| Complex64::new(out_re[i], out_im[i])).collect(),
            time: t,
        })
    }
}

pub fn ctqw(h: &RealSymMatrix, t: f64, init: &[Complex64]) -> Result<AmplitudeVector> {
    Propagator::new(h)?.evolve(t, init)
}

pub fn basis_state(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// Inclusive grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::BadParams(format!(
                "time grid {start}:{stop}:{step} needs step > 0 and stop >= start"
            )));
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(t: f64) -> Self {
        Self {
            start: t,
            stop: t,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 10.0,
            step: 0.1,
        }
    }
}

impl FromStr for TimeGrid {
    type Err = Error;

    /// `start:stop:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad time grid '{s}'")))?;
        match parts[..] {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(Error::Parse(format!("time grid '{s}' must be start:stop:step"))),
        }
    }
}

/// Probability mass per block at every grid time; `probs[k][j]` is block `j`
/// at `times[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityTrace {
    pub times: Vec<f64>,
    pub probs: Vec<Vec<f64>>,
}

impl ProbabilityTrace {
    /// Largest per-block gap and the time where it occurs.
    pub fn max_gap(&self, other: &ProbabilityTrace) -> Option<(f64, f64, usize)> {
        if self.times.len() != other.times.len() {
            return None;
        }
        let mut best: Option<(f64, f64, usize)> = None;
        for (k, (p, q)) in self.probs.iter().zip(&other.probs).enumerate() {
            if p.len() != q.len() {
                return None;
            }
            for (j, (x, y)) in p.iter().zip(q).enumerate() {
                let d = (x - y).abs();
                if best.is_none_or(|(bd, _, _)| d > bd) {
                    best = Some((d, self.times[k], j));
                }
            }
        }
        best
    }
}

/// Full-space walk from `origin`, measured on the blocks of `p`.
pub fn partition_probabilities(
    h: &RealSymMatrix,
    origin: usize,
    p: &VertexPartition,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<ProbabilityTrace> {
    let n = h.dim();
    if origin >= n {
        return Err(Error::IndexOutOfRange { index: origin, n });
    }
    let prop = Propagator::new(h)?;
    let init = basis_state(n, origin);
    let times = grid.points();
    let probs = exec
        .map(&times, |&t| prop.evolve(t, &init).map(|psi| psi.block_probabilities(p)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbabilityTrace { times, probs })
}

/// Walk inside the quotient space, starting on block `start`. Valid as a
/// stand-in for the full walk only when the partition closes and the start
/// block is the single origin vertex.
pub fn quotient_probabilities(
    q: &RealSymMatrix,
    start: usize,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<ProbabilityTrace> {
    let k = q.dim();
    let singletons = VertexPartition::new((0..k).map(|i| vec![i]).collect(), k).expect("singleton blocks");
    partition_probabilities(q, start, &singletons, grid, exec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumTrace {
    pub partition: VertexPartition,
    pub trace: ProbabilityTrace,
    /// Closure residual of the partition.
    pub residual: f64,
    /// Gap between the full-space and quotient-space traces when the
    /// partition closes.
    pub dual_path_gap: Option<f64>,
}

/// Probabilities per block of `p` (BFS strata from `origin` when `None`). If
/// the partition closes, the trace is recomputed in the quotient space and the
/// two must agree.
pub fn stratum_probabilities(
    g: &Graph,
    origin: usize,
    p: Option<&VertexPartition>,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<StratumTrace> {
    let partition = match p {
        Some(p) => p.clone(),
        None => bfs_stratification(g, origin)?.partition,
    };
    let a = g.adjacency_matrix();
    let trace = partition_probabilities(&a, origin, &partition, grid, exec)?;
    let q = project(&a, &partition, DEFAULT_CLOSURE_TOL)?;
    let start = partition.blocks().iter().position(|b| b.as_slice() == [origin]);
    let dual_path_gap = match (q.closed, start) {
        (true, Some(s)) => {
            let qt = quotient_probabilities(&q.matrix, s, grid, exec)?;
            let gap = trace.max_gap(&qt).map_or(f64::INFINITY, |(d, _, _)| d);
            if gap > DUAL_PATH_TOL {
                return Err(Error::PathDisagreement(gap));
            }
            Some(gap)
        }
        _ => None,
    };
    Ok(StratumTrace {
        partition,
        trace,
        residual: q.residual,
        dual_path_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn k2() -> Graph {
        Graph::from_edge_list(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn trivial_walks() {
        let psi = ctqw(&RealSymMatrix::zeros(1), 3.0, &basis_state(1, 0)).unwrap();
        assert_eq!(psi.entries, vec![Complex64::new(1.0, 0.0)]);
        for t in [0.0, 0.3, 1.7, 4.0] {
            let psi = ctqw(&k2().adjacency_matrix(), t, &basis_state(2, 0)).unwrap();
            assert!((psi.entries[0] - Complex64::new(t.cos(), 0.0)).norm() < 1e-12);
            assert!((psi.entries[1] - Complex64::new(0.0, -t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let v = vec![Complex64::new(1.0, 0.0); 2];
        assert!(matches!(
            ctqw(&k2().adjacency_matrix(), 1.0, &v),
            Err(Error::UnnormalizedInput(_))
        ));
    }

    #[test]
    fn q4_unitary_and_dual_path() {
        let q4 = example("Q4").unwrap().graph;
        let psi = ctqw(&q4.adjacency_matrix(), 1.0, &basis_state(16, 0)).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        let grid = TimeGrid::single(std::f64::consts::FRAC_PI_2);
        let st = stratum_probabilities(&q4, 0, None, &grid, Execution::Sequential).unwrap();
        assert!(st.dual_path_gap.unwrap() < 1e-8);
    }

    #[test]
    fn k2_at_zero() {
        let st = stratum_probabilities(&k2(), 0, None, &TimeGrid::single(0.0), Execution::Sequential).unwrap();
        let p = &st.trace.probs[0];
        assert!((p[0] - 1.0).abs() < 1e-14 && p[1].abs() < 1e-14);
    }

    #[test]
    fn grid_points_and_parse() {
        let g: TimeGrid = "0:10:0.1".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 101);
        assert!((pts[100] - 10.0).abs() < 1e-12);
        assert!("0:1".parse::<TimeGrid>().is_err());
        assert!("0:1:0".parse::<TimeGrid>().is_err());
        assert!("1:0:0.1".parse::<TimeGrid>().is_err());
    }

    #[test]
    fn g_pair_traces_differ() {
        let g1 = example("G1").unwrap();
        let g2 = example("G2").unwrap();
        let grid = TimeGrid::default();
        let t1 = stratum_probabilities(&g1.graph, g1.origin, None, &grid, Execution::Parallel).unwrap();
        let t2 = stratum_probabilities(&g2.graph, g2.origin, None, &grid, Execution::Parallel).unwrap();
        assert!(t1.trace.max_gap(&t2.trace).unwrap().0 > 1e-3);
    }

    #[test]
    fn execution_modes_agree() {
        let q4 = example("HOFFMAN").unwrap().graph;
        let grid = TimeGrid::default();
        let s = stratum_probabilities(&q4, 0, None, &grid, Execution::Sequential).unwrap();
        let p = stratum_probabilities(&q4, 0, None, &grid, Execution::Parallel).unwrap();
        assert_eq!(s, p);
    }

    fn random_sym(seed: u64, n: usize) -> RealSymMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        RealSymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_state(seed: u64, n: usize) -> Vec<Complex64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    proptest! {
        #[test]
        fn unitarity(seed in 0u64..10_000, n in 1usize..12, t in 0.0f64..10.0) {
            let psi = ctqw(&random_sym(seed, n), t, &random_state(seed, n)).unwrap();
            prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn time_composition(seed in 0u64..10_000, n in 1usize..10, s in 0.0f64..5.0, t in 0.0f64..5.0) {
            let h = random_sym(seed, n);
            let prop = Propagator::new(&h).unwrap();
            let psi = random_state(seed, n);
            let direct = prop.evolve(s + t, &psi).unwrap();
            let mid = prop.evolve(t, &psi).unwrap();
            let two = prop.evolve(s, &mid.entries).unwrap();
            let gap = direct.entries.iter().zip(&two.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(gap < 1e-9);
        }
    }
}
