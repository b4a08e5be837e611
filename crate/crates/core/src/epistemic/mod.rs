//! The model's state space: epistemic states (ρ, S), the distribution of the
//! global variable ξ, the restricted momentum law, ensemble sampling, and the
//! wavefunction map.

mod ensemble;
mod families;
mod state;
mod wavefunction;
mod xi;

pub use ensemble::{draw_ensemble, for_each_sample, CellSampler, OnticSample};
pub use families::{
    box_ground_state, coherent_state, entangled_gaussian_pair, gaussian_packet, gaussian_state,
    plane_wave_momentum, plane_wave_state, random_localized_state, random_smooth_state,
    RandomStateOptions,
};
pub use state::{solve_density_for_field, EpistemicState, MomentumLaw, StateKind};
pub use wavefunction::{from_wavefunction, to_wavefunction, PhaseReport};
pub use xi::{XiLaw, XiModel};

pub(crate) use ensemble::{check_hbar, draw_one};

use crate::error::{Result, SimError};
use crate::fields::io as field_io;
use crate::scalar::Real;
use std::io::{BufRead, Read, Write};

/// Serialize a state as metadata plus its two field files, concatenated.
pub fn write_state_csv<T: Real, W: Write>(state: &EpistemicState<T>, w: &mut W) -> Result<()> {
    let kind = match state.kind() {
        StateKind::Classical => "classical",
        StateKind::Quantum => "quantum",
    };
    writeln!(w, "ontoqm-state,v1,{kind},{}", state.hbar().to64())?;
    field_io::write_scalar_csv(state.rho(), w)?;
    field_io::write_scalar_csv(state.phase(), w)?;
    Ok(())
}

/// Inverse of [`write_state_csv`].
pub fn read_state_csv<T: Real, R: Read>(r: R) -> Result<EpistemicState<T>> {
    let mut reader = std::io::BufReader::new(r);
    let mut head = String::new();
    reader.read_line(&mut head)?;
    let head = head.trim_end();
    let parts: Vec<&str> = head.split(',').collect();
    if parts.len() != 4 || parts[0] != "ontoqm-state" || parts[1] != "v1" {
        return Err(SimError::Parse("not an ontoqm state file".into()));
    }
    let kind = match parts[2] {
        "classical" => StateKind::Classical,
        "quantum" => StateKind::Quantum,
        other => return Err(SimError::Parse(format!("unknown state kind '{other}'"))),
    };
    let hbar: f64 = parts[3]
        .parse()
        .map_err(|_| SimError::Parse("bad hbar in state header".into()))?;
    // The two field sections: split the remaining text at the second header.
    let mut rest = String::new();
    reader.read_to_string(&mut rest)?;
    let second = rest
        .match_indices("ontoqm-field,")
        .nth(1)
        .map(|(i, _)| i)
        .ok_or_else(|| SimError::Parse("state file lacks two field sections".into()))?;
    let rho = field_io::read_scalar_csv::<T, _>(rest[..second].as_bytes())?;
    let phase = field_io::read_scalar_csv::<T, _>(rest[second..].as_bytes())?;
    EpistemicState::new(rho, phase, kind, T::of(hbar))
}

#[cfg(test)]
mod tests;
