//! High-order perturbative expansion of the transmon spectrum in the Fock
//! basis, carried out in exact rational arithmetic.

mod hamiltonian;
mod recurrence;
mod weights;

pub use hamiltonian::{HamiltonianSet, HamiltonianTerm};
pub use recurrence::{
    diagonalization_operator, eigen_recurrence, eigen_recurrence_with, normalize_states,
    EigenSeries,
};
pub use weights::{charge_weights, reference_series, transmon_series, TransmonSeriesSet};
