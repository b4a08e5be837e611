//! The classical limit as a numerical experiment.
//!
//! With the initial data (ρ₀, S₀) held fixed and |∂S| of order one, the
//! quantum and classical flows differ only through the ħ² term in the
//! phase equation. Shrinking ħ must therefore shrink the quantum–classical
//! divergence, and quadratically so. This module runs both flows from the same
//! data for a decreasing ħ sequence and reports the divergences.

use crate::epistemic::{from_wavefunction, to_wavefunction, EpistemicState, StateKind};
use crate::error::Result;
use crate::expectation::{mean_momentum, QuadraticObservable};
use crate::fields::ScalarField;
use crate::numeric::Accum;
use crate::scalar::Real;

use super::hamiltonian::Hamiltonian;
use super::madelung::evolve_classical_fields;
use super::schrodinger::evolve_schrodinger;

/// Divergences between the quantum and classical flows per ħ.
#[derive(Clone, Debug)]
pub struct ClassicalLimitReport<T> {
    pub hbars: Vec<T>,
    /// ρ-weighted rms of S_quantum − S_classical at the final time, with the
    /// (unphysical) constant offset removed.
    pub phase_divergence: Vec<T>,
    /// max over stored times of |⟨q⟩_quantum − ⟨q⟩_classical|.
    pub mean_q_divergence: Vec<T>,
    /// max over stored times of |⟨p⟩_quantum − ⟨p⟩_classical|.
    pub mean_p_divergence: Vec<T>,
}

impl<T: Real> ClassicalLimitReport<T> {
    /// Successive phase-divergence ratios (≈ 4 when the gap is ∝ ħ²
    /// and ħ is halved each step).
    pub fn phase_ratios(&self) -> Vec<T> {
        self.phase_divergence
            .windows(2)
            .map(|w| w[0] / w[1])
            .collect()
    }

    pub fn monotone_decreasing(&self) -> bool {
        self.phase_divergence.windows(2).all(|w| w[1] < w[0])
    }
}

/// Evolve quantum and classical flows from the same (ρ₀, S₀) for each ħ.
///
/// The classical flow does not know ħ, so it runs once; the quantum flow runs
/// per ħ with ψ₀ = √ρ₀·exp(iS₀/ħ).
pub fn classical_limit_check<T: Real>(
    rho0: &ScalarField<T>,
    s0: &ScalarField<T>,
    h: &Hamiltonian<T>,
    hbars: &[T],
    dt: T,
    t_final: T,
    stride: usize,
) -> Result<ClassicalLimitReport<T>> {
    let stride = stride.max(1);
    // Classical reference (ħ enters nowhere; pick any positive value).
    let unit = T::one();
    let classical0 = EpistemicState::new(rho0.clone(), s0.clone(), StateKind::Classical, unit)?;
    let classical = evolve_classical_fields(&classical0, h, dt, t_final, stride)?;
    let cl_series: Vec<(T, T, T)> = classical
        .snapshots
        .iter()
        .map(|(t, s)| {
            Ok((
                *t,
                s.mean_position(0)?,
                mean_momentum(s, 0)?,
            ))
        })
        .collect::<Result<_>>()?;
    let s_classical = classical.state.phase().clone();
    let rho_classical = classical.state.rho().clone();

    let mut report = ClassicalLimitReport {
        hbars: hbars.to_vec(),
        phase_divergence: Vec::new(),
        mean_q_divergence: Vec::new(),
        mean_p_divergence: Vec::new(),
    };

    for &hbar in hbars {
        let q0 = EpistemicState::new(rho0.clone(), s0.clone(), StateKind::Quantum, hbar)?;
        let psi0 = to_wavefunction(&q0)?;
        let run = evolve_schrodinger(&psi0, h, hbar, dt, t_final, stride)?;

        // Mean-motion divergences over the common snapshot times.
        let mut dq_max = T::zero();
        let mut dp_max = T::zero();
        let obs_q = QuadraticObservable::position(rho0.grid(), 0)?;
        let obs_p = QuadraticObservable::momentum(1, 0)?;
        for ((_, psi), &(_, q_cl, p_cl)) in run.snapshots.iter().zip(&cl_series) {
            let q_qm = crate::expectation::quantum_expectation(&obs_q, psi, hbar)?.re;
            let p_qm = crate::expectation::quantum_expectation(&obs_p, psi, hbar)?.re;
            dq_max = dq_max.max((q_qm - q_cl).abs());
            dp_max = dp_max.max((p_qm - p_cl).abs());
        }
        report.mean_q_divergence.push(dq_max);
        report.mean_p_divergence.push(dp_max);

        // Phase-field divergence at the final time, classical-ρ weighted.
        let (qstate, _) = from_wavefunction(&run.psi, hbar)?;
        let diff = qstate.phase().sub(&s_classical)?;
        let mean = rho_classical.integrate_with(&diff)?;
        let mut acc = Accum::new();
        for (d, r) in diff.values().iter().zip(rho_classical.values()) {
            let c = *d - mean;
            acc.add(c * c * *r);
        }
        report
            .phase_divergence
            .push((acc.value() * rho0.grid().cell_volume()).sqrt());
    }
    Ok(report)
}
