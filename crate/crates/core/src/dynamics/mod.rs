//! Time evolution: Schrödinger, Madelung-form field flow, and classical
//! Hamilton–Jacobi characteristics, with conservation diagnostics.

mod classical;
mod energy;
mod hamiltonian;
mod limit;
mod madelung;
mod report;
mod schrodinger;

pub use classical::{evolve_classical_hj, ClassicalEvolution, Trajectory};
pub use energy::{average_energy, average_energy_series, series_defect};
pub use hamiltonian::Hamiltonian;
pub use limit::{classical_limit_check, ClassicalLimitReport};
pub use madelung::{evolve_classical_fields, evolve_madelung, StateEvolution};
pub use report::{EvolutionMethod, EvolutionReport};
pub use schrodinger::{
    evolve_schrodinger, quantum_energy_series, snapshots_to_states, QuantumEvolution,
    NORM_DRIFT_TOL,
};

#[cfg(test)]
mod tests;
