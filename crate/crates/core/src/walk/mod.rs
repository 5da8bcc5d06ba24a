//! Quantum walks on graphs and on their fermionic sectors.

pub mod ctqw;
pub mod fermion;
pub mod verdict;

pub use ctqw::{
    basis_state, ctqw, partition_probabilities, quotient_probabilities, stratum_probabilities, AmplitudeVector,
    ProbabilityTrace, Propagator, StratumTrace, TimeGrid,
};
pub use fermion::{
    binomial, fermion_hop_operator, fermionic_quotient, g45_fermionic_vectors, reference_fermi_quotient, FermiQuotient,
    FermionOperator, FermionSpace, Phi7Convention, SparseSym, DEFAULT_NNZ_CAP,
};
pub use verdict::{batch_verdicts, walk_verdict, WalkConfig, WalkStrategy, WalkSubject, WalkVerdict, Witness};
