//! The map between epistemic states and wavefunctions: ψ = √ρ · exp(iS/ħ).
//!
//! The forward map is pointwise. The inverse map recovers ρ = |ψ|² exactly and
//! S = ħ·arg ψ up to the usual caveats: the argument must be unwrapped (done by
//! a breadth-first sweep from the density maximum, jump-corrected by 2π), it is
//! undefined on nodes (such points are masked and filled from neighbors), and
//! on periodic axes the phase may wind — the winding number per axis is
//! recorded rather than forbidden.

use num_complex::Complex;

use crate::error::{Result, SimError};
use crate::fields::{Boundary, ComplexField, ScalarField};
use crate::scalar::Real;
use crate::{NODE_EPS_REL, NORM_TOL};

use super::state::{EpistemicState, StateKind};

/// Bookkeeping from phase recovery.
#[derive(Clone, Debug)]
pub struct PhaseReport {
    /// True where |ψ|² was too small for the phase to mean anything; the
    /// stored S there is interpolated from neighbors.
    pub undefined: Vec<bool>,
    /// Number of masked points.
    pub undefined_count: usize,
    /// Phase winding number around each periodic axis (0 on vanishing axes),
    /// measured along the loop through the density maximum.
    pub winding: Vec<i64>,
}

/// ψ = √ρ · exp(iS/ħ); the state must be quantum.
pub fn to_wavefunction<T: Real>(state: &EpistemicState<T>) -> Result<ComplexField<T>> {
    if state.kind() != StateKind::Quantum {
        return Err(SimError::Config(
            "only quantum states map to a wavefunction".into(),
        ));
    }
    let inv_h = state.hbar().recip();
    let values = state
        .rho()
        .values()
        .iter()
        .zip(state.phase().values())
        .map(|(&r, &s)| {
            let amp = r.sqrt();
            let th = s * inv_h;
            Complex::new(amp * th.cos(), amp * th.sin())
        })
        .collect();
    ComplexField::new(state.grid().clone(), values)
}

/// Invert the wavefunction map: ρ = |ψ|², S = ħ·arg ψ unwrapped.
pub fn from_wavefunction<T: Real>(
    psi: &ComplexField<T>,
    hbar: T,
) -> Result<(EpistemicState<T>, PhaseReport)> {
    let norm = psi.norm_sq();
    if (norm - T::one()).abs() > T::of(NORM_TOL) {
        return Err(SimError::InvalidField(format!(
            "wavefunction norm² is {} (must be 1 within {NORM_TOL:e})",
            norm.to64()
        )));
    }
    let grid = psi.grid().clone();
    let rho = psi.modulus_squared();
    let rho_max = rho.max_value();
    let eps = T::of(NODE_EPS_REL) * rho_max;
    let undefined: Vec<bool> = rho.values().iter().map(|&r| r <= eps).collect();
    let undefined_count = undefined.iter().filter(|&&m| m).count();

    let theta: Vec<T> = psi.values().iter().map(|v| v.im.atan2(v.re)).collect();
    let start = rho
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .expect("non-empty grid");

    let two_pi = T::of(std::f64::consts::TAU);
    let wrap = |x: T| x - two_pi * (x / two_pi).round();

    // Breadth-first unwrap over unmasked points, FIFO from the density
    // maximum, neighbors visited in axis order: deterministic.
    let n = grid.len();
    let dims = grid.dims();
    let mut s = vec![T::zero(); n];
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    s[start] = theta[start];
    visited[start] = true;
    queue.push_back(start);
    let neighbor = |p: usize, a: usize, dir: isize| -> Option<usize> {
        let ax = &grid.axes()[a];
        let i = grid.axis_index(p, a) as isize;
        let stride = grid.stride(a);
        let np = ax.points as isize;
        let j = match ax.boundary {
            Boundary::Periodic => (i + dir).rem_euclid(np),
            Boundary::Vanishing => {
                let j = i + dir;
                if j < 0 || j >= np {
                    return None;
                }
                j
            }
        };
        Some((p as isize + (j - i) * stride as isize) as usize)
    };
    while let Some(p) = queue.pop_front() {
        for a in 0..dims {
            for dir in [-1isize, 1] {
                if let Some(q) = neighbor(p, a, dir) {
                    if !visited[q] && !undefined[q] {
                        visited[q] = true;
                        s[q] = s[p] + wrap(theta[q] - theta[p]);
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    // Fill masked (and any unreached) points from already-assigned neighbors.
    let mut fill: std::collections::VecDeque<usize> =
        (0..n).filter(|&p| visited[p]).collect();
    while let Some(p) = fill.pop_front() {
        for a in 0..dims {
            for dir in [-1isize, 1] {
                if let Some(q) = neighbor(p, a, dir) {
                    if !visited[q] {
                        visited[q] = true;
                        s[q] = s[p];
                        fill.push_back(q);
                    }
                }
            }
        }
    }

    // Winding per periodic axis along the loop through the density maximum.
    let mut winding = vec![0i64; dims];
    for a in 0..dims {
        if grid.axes()[a].boundary != Boundary::Periodic {
            continue;
        }
        let stride = grid.stride(a);
        let points = grid.axes()[a].points;
        let base = start - grid.axis_index(start, a) * stride;
        let mut total = T::zero();
        for i in 0..points {
            let p = base + i * stride;
            let q = base + ((i + 1) % points) * stride;
            total += wrap(theta[q] - theta[p]);
        }
        winding[a] = (total / two_pi).round().to64() as i64;
    }

    let phase = ScalarField::new(grid.clone(), s.iter().map(|&v| v * hbar).collect())?;
    let state = EpistemicState::new(rho, phase, StateKind::Quantum, hbar)?;
    Ok((state, PhaseReport { undefined, undefined_count, winding }))
}
