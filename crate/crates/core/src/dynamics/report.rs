//! Conservation diagnostics recorded along every evolution.

use std::io::Write;

use crate::error::Result;
use crate::scalar::Real;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EvolutionMethod {
    Schrodinger,
    Madelung,
    ClassicalHj,
    /// The Madelung-form flow with the ħ² term switched off.
    ClassicalFields,
}

impl EvolutionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EvolutionMethod::Schrodinger => "schrodinger",
            EvolutionMethod::Madelung => "madelung",
            EvolutionMethod::ClassicalHj => "classical_hj",
            EvolutionMethod::ClassicalFields => "classical_fields",
        }
    }
}

/// Per-step conservation series: times, norm error `∫ρ − 1`, and ⟨H⟩.
#[derive(Clone, Debug)]
pub struct EvolutionReport<T> {
    pub method: EvolutionMethod,
    pub times: Vec<T>,
    pub norm_error: Vec<T>,
    pub energy: Vec<T>,
    /// Largest per-step change of the norm along the run.
    pub max_step_norm_drift: T,
}

impl<T: Real> EvolutionReport<T> {
    pub(crate) fn new(method: EvolutionMethod) -> Self {
        Self {
            method,
            times: Vec::new(),
            norm_error: Vec::new(),
            energy: Vec::new(),
            max_step_norm_drift: T::zero(),
        }
    }

    pub(crate) fn push(&mut self, t: T, norm_error: T, energy: T) {
        if let Some(&last) = self.norm_error.last() {
            self.max_step_norm_drift = self.max_step_norm_drift.max((norm_error - last).abs());
        }
        self.times.push(t);
        self.norm_error.push(norm_error);
        self.energy.push(energy);
    }

    /// Max |⟨H⟩(t) − ⟨H⟩(0)| / |⟨H⟩(0)| along the run.
    pub fn energy_defect(&self) -> T {
        let Some(&e0) = self.energy.first() else {
            return T::zero();
        };
        let scale = e0.abs().max(T::of(1e-300));
        self.energy
            .iter()
            .fold(T::zero(), |m, &e| m.max((e - e0).abs()))
            / scale
    }

    /// Max |∫ρ − 1| along the run.
    pub fn max_norm_error(&self) -> T {
        self.norm_error.iter().fold(T::zero(), |m, &e| m.max(e.abs()))
    }

    /// CSV rows `time,norm,energy` (norm as ∫ρ, with a header row).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "time,norm,energy")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{},{},{}",
                self.times[i].to64(),
                1.0 + self.norm_error[i].to64(),
                self.energy[i].to64()
            )?;
        }
        Ok(())
    }
}
