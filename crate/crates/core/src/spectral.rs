//! Eigenvalues of symmetric matrices, cospectrality and oscillator energies.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::RealSymMatrix;

/// Ascending eigenvalues with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
}

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest elementwise deviation between sorted spectra; infinite when
    /// the lengths differ.
    pub fn max_deviation(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition with eigenvector columns matching `spectrum.values`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub vectors: DMatrix<f64>,
}

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

fn decompose(m: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER).ok_or(Error::ConvergenceFailure)
}

pub fn sym_eig(m: &RealSymMatrix) -> Result<Spectrum> {
    if m.dim() == 0 {
        return Ok(Spectrum { values: vec![] });
    }
    let e = decompose(m.as_matrix())?;
    Ok(Spectrum::from_unsorted(e.eigenvalues.iter().copied().collect()))
}

pub fn sym_eig_vectors(m: &RealSymMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Ok(EigenDecomposition {
            spectrum: Spectrum { values: vec![] },
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let e = decompose(m.as_matrix())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| e.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition {
        spectrum: Spectrum { values },
        vectors,
    })
}

pub fn adjacency_spectrum(g: &Graph) -> Result<Spectrum> {
    sym_eig(&g.adjacency_matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CospectralReport {
    pub equal: bool,
    pub max_dev: f64,
}

pub fn cospectral(g1: &Graph, g2: &Graph, tol: f64) -> Result<CospectralReport> {
    if g1.n() != g2.n() {
        return Ok(CospectralReport {
            equal: false,
            max_dev: f64::INFINITY,
        });
    }
    let max_dev = adjacency_spectrum(g1)?.max_deviation(&adjacency_spectrum(g2)?);
    Ok(CospectralReport {
        equal: max_dev <= tol,
        max_dev,
    })
}

/// Adjacency spectrum of `G4(n, n+2)` and `G5(n, n+2)` from the closed-form
/// eigenvalue list. The printed list covers `6n + 14` values; the remaining
/// `2(n − 1)` are zeros coming from the two `a`-clouds.
pub fn closed_form_spectrum_g45(n: usize) -> Result<Spectrum> {
    if n < 1 {
        return Err(Error::BadParams("closed form needs n >= 1".into()));
    }
    let b = n + 2;
    let nf = n as f64;
    let mut v = Vec::with_capacity(8 * n + 12);
    let mut push = |x: f64, mult: usize| {
        for _ in 0..mult {
            v.push(x);
            if x != 0.0 {
                v.push(-x);
            }
        }
    };
    push(nf + 2.0, 1);
    push(nf + 1.0, 2);
    push(nf, 1);
    push(2.0, b - 1);
    push(1.0, 2 * (b - 1));
    push(0.0, 2 * (n - 1));
    Ok(Spectrum::from_unsorted(v))
}

fn laplacian_spectrum_checked(g: &Graph, coupling: f64) -> Result<Spectrum> {
    if coupling < 0.0 || coupling.is_nan() {
        return Err(Error::NegativeCoupling(coupling));
    }
    sym_eig(&g.laplacian())
}

/// Zero-point energy `½ Σ sqrt(1 + 2g·α_i)` over Laplacian eigenvalues `α_i`.
pub fn ground_state_energy(g: &Graph, coupling: f64) -> Result<f64> {
    let alpha = laplacian_spectrum_checked(g, coupling)?;
    Ok(0.5
        * alpha
            .values
            .iter()
            .map(|&a| (1.0 + 2.0 * coupling * a.max(0.0)).sqrt())
            .sum::<f64>())
}

/// The product form `½ Π (1 + 2g·α_i)` as printed alongside the oscillator
/// Hamiltonian. Equal across cospectral-Laplacian graphs just like the sum.
pub fn ground_state_energy_product(g: &Graph, coupling: f64) -> Result<f64> {
    let alpha = laplacian_spectrum_checked(g, coupling)?;
    Ok(0.5
        * alpha
            .values
            .iter()
            .map(|&a| 1.0 + 2.0 * coupling * a.max(0.0))
            .product::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_g4, build_g5};
    use crate::fixtures::example;
    use proptest::prelude::*;

    fn k2() -> Graph {
        Graph::from_edge_list(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn small_spectra() {
        assert_eq!(adjacency_spectrum(&k2()).unwrap().values, vec![-1.0, 1.0]);
        let id = sym_eig(&RealSymMatrix::identity(5)).unwrap();
        assert_eq!(id.values, vec![1.0; 5]);
    }

    #[test]
    fn vectors_reconstruct() {
        let g = build_g4(1, 3).unwrap().graph;
        let a = g.adjacency_matrix();
        let e = sym_eig_vectors(&a).unwrap();
        let v = &e.vectors;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.spectrum.values.clone()));
        let back = v * d * v.transpose();
        assert!((back - a.as_matrix()).amax() < 1e-10);
        let gram = v.transpose() * v;
        assert!((gram - DMatrix::identity(20, 20)).amax() < 1e-10);
    }

    #[test]
    fn bipartite_symmetry() {
        for name in ["Q4", "HOFFMAN"] {
            let s = adjacency_spectrum(&example(name).unwrap().graph).unwrap();
            let n = s.len();
            for i in 0..n {
                assert!((s.values[i] + s.values[n - 1 - i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn family_cospectrality_and_closed_form() {
        for n in 1..=3 {
            let g4 = build_g4(n, n + 2).unwrap().graph;
            let g5 = build_g5(n, n + 2).unwrap().graph;
            assert!(cospectral(&g4, &g5, 1e-8).unwrap().equal);
            let cf = closed_form_spectrum_g45(n).unwrap();
            assert_eq!(cf.len(), 8 * n + 12);
            assert!(cf.max_deviation(&adjacency_spectrum(&g4).unwrap()) < 1e-8);
        }
        let cf1 = closed_form_spectrum_g45(1).unwrap();
        let count = |x: f64| cf1.values.iter().filter(|&&v| v == x).count();
        assert_eq!([count(3.0), count(2.0), count(1.0)], [1, 4, 5]);
        assert_eq!([count(-3.0), count(-2.0), count(-1.0), count(0.0)], [1, 4, 5, 0]);
        assert!(closed_form_spectrum_g45(0).is_err());
    }

    #[test]
    fn size_mismatch_is_not_cospectral() {
        let p3 = Graph::from_edge_list(3, [(0, 1), (1, 2)]).unwrap();
        let r = cospectral(&k2(), &p3, 1.0).unwrap();
        assert!(!r.equal);
        assert!(r.max_dev.is_infinite());
    }

    #[test]
    fn fixture_pairs_cospectral() {
        for (l, r) in crate::fixtures::WALK_PAIRS
            .iter()
            .chain(crate::fixtures::ENTROPY_PAIRS.iter())
        {
            let a = example(l).unwrap().graph;
            let b = example(r).unwrap().graph;
            assert!(cospectral(&a, &b, 1e-8).unwrap().equal, "{l}/{r}");
        }
    }

    #[test]
    fn energies() {
        let single = Graph::from_edge_list(3, []).unwrap();
        assert_eq!(ground_state_energy(&single, 0.0).unwrap(), 1.5);
        let e = ground_state_energy(&k2(), 0.5).unwrap();
        assert!((e - 0.5 * (1.0 + 3f64.sqrt())).abs() < 1e-12);
        assert_eq!(ground_state_energy(&k2(), -0.1), Err(Error::NegativeCoupling(-0.1)));
        let g4 = build_g4(1, 3).unwrap().graph;
        let g5 = build_g5(1, 3).unwrap().graph;
        let (e4, e5) = (
            ground_state_energy(&g4, 0.1).unwrap(),
            ground_state_energy(&g5, 0.1).unwrap(),
        );
        assert!((e4 - e5).abs() < 1e-10);
        let (p4, p5) = (
            ground_state_energy_product(&g4, 0.1).unwrap(),
            ground_state_energy_product(&g5, 0.1).unwrap(),
        );
        assert!(((p4 - p5) / p4).abs() < 1e-10);
    }

    #[test]
    fn trace_identities() {
        for name in crate::fixtures::NAMES {
            let g = example(name).unwrap().graph;
            let s = adjacency_spectrum(&g).unwrap();
            let sum: f64 = s.values.iter().sum();
            let sq: f64 = s.values.iter().map(|x| x * x).sum();
            assert!(sum.abs() < 1e-9);
            let e2 = 2.0 * g.edge_count() as f64;
            assert!(((sq - e2) / e2).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn permutation_invariance(seed in 0u64..1000, n in 2usize..14) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        pairs.push((u, v));
                    }
                }
            }
            let g = Graph::from_edge_list(n, pairs).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permute(&perm).unwrap();
            let d = adjacency_spectrum(&g).unwrap().max_deviation(&adjacency_spectrum(&h).unwrap());
            prop_assert!(d < 1e-9);
            prop_assert_eq!(g.degree_multiset(), h.degree_multiset());
        }
    }
}
