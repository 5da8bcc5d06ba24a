//! Invariants for telling cospectral graphs apart: strata quotients and
//! continuous-time quantum walks (single particle and fermionic), and the
//! bipartite entanglement entropy of the coupled-oscillator ground state.

pub mod entangle;
pub mod error;
pub mod exec;
pub mod families;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod spectral;
pub mod strata;
pub mod walk;

pub use error::{Error, Result};
pub use exec::Execution;
pub use families::{Family, FamilyInstance};
pub use graph::{Graph, VertexPartition};
pub use matrix::{Block, RealSymMatrix};
