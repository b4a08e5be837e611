//! Average-energy quadrature and conservation diagnostics.
//!
//! For a quantum state the average energy is
//! `∫ρ[Σᵢ(∂ᵢS − Aᵢ)²/2mᵢ + (ħ²/8mᵢ)(∂ᵢρ/ρ)² + V]`; for a classical state the
//! ħ² term is absent. Conservation of this number along a run is one of the
//! two axioms that single out the dynamics, so it doubles as a runtime check.

use crate::epistemic::{EpistemicState, StateKind};
use crate::error::Result;
use crate::expectation::{ensemble_average_classical, ensemble_average_closed};
use crate::scalar::Real;

use super::hamiltonian::Hamiltonian;

/// ⟨H⟩ for the state's own kind (ħ² term for quantum, none for classical).
pub fn average_energy<T: Real>(state: &EpistemicState<T>, h: &Hamiltonian<T>) -> Result<T> {
    let obs = h.as_observable()?;
    match state.kind() {
        StateKind::Quantum => ensemble_average_closed(&obs, state),
        StateKind::Classical => ensemble_average_classical(&obs, state),
    }
}

/// ⟨H⟩ at each stored time.
pub fn average_energy_series<T: Real>(
    snapshots: &[(T, EpistemicState<T>)],
    h: &Hamiltonian<T>,
) -> Result<Vec<(T, T)>> {
    snapshots
        .iter()
        .map(|(t, s)| average_energy(s, h).map(|e| (*t, e)))
        .collect()
}

/// Max |E(t) − E(0)| / |E(0)| over a series.
pub fn series_defect<T: Real>(series: &[(T, T)]) -> T {
    let Some(&(_, e0)) = series.first() else {
        return T::zero();
    };
    let scale = e0.abs().max(T::of(1e-300));
    series.iter().fold(T::zero(), |m, &(_, e)| m.max((e - e0).abs())) / scale
}
