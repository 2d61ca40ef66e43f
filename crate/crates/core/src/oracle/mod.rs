//! Dense state-vector and density-matrix ground truth for small systems.

mod density;
mod eigen;
mod state;

pub use density::{
    apply_dephasing, apply_dephasing_kraus, dephase_sites, erasure_mixture, partial_trace, qfi_mixed, DensityMatrix,
    SPECTRAL_CUTOFF,
};
pub use eigen::{eigh, EigenDecomposition};
pub use state::{
    apply_pauli, apply_twin_clifford, evolve, graph_state_vector, pauli_expectation, qfi_pure, qfi_pure_active,
    stabilizer_state_vector, StateVector,
};

use crate::error::{Error, Result};

/// Largest qubit count for state vectors.
pub const ORACLE_LIMIT: usize = 14;
/// Largest qubit count for density matrices.
pub const DEPHASING_LIMIT: usize = 10;

pub(crate) fn check_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::SizeGuard { what, n, limit });
    }
    Ok(())
}

pub(crate) fn check_qubits(n: usize, qubits: &[usize]) -> Result<()> {
    match qubits.iter().find(|&&q| q >= n) {
        Some(&q) => Err(Error::InvalidState(format!("qubit {q} out of range (n = {n})"))),
        None => Ok(()),
    }
}
