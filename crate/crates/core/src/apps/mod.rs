//! Applications of the channel fidelity, all in `f64`.
//!
//! * [`hamiltonian`]: choosing the probe time that best separates a set of Hamiltonians.
//! * [`acin`]: entangled preprocessing that makes two qubit unitaries perfectly distinguishable.
//! * [`qecc`]: checking that a recovery channel undoes a noise channel on a code subspace.

pub mod acin;
pub mod hamiltonian;
pub mod qecc;

pub use acin::{acin_search, max_phase_gap, tensor_power_fidelity, AcinResult};
pub use hamiltonian::{
    difference_exponent_fidelity, optimize_discrete, optimize_discrimination, pairwise_fidelity_at,
    DiscriminationResult, HamiltonianEnsemble,
};
pub use qecc::{bit_flip_code, pauli_noise, pauli_string, qecc_check, CodeSpec, QeccReport};
