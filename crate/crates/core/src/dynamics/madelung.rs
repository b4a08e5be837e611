//! Coupled continuity + modified Hamilton–Jacobi integration.
//!
//! The pair evolved is (ln ρ, S):
//!
//! ```text
//! ∂ₜ(ln ρ) = −Σₐ [ (∂ₐ ln ρ)·vₐ + ∂ₐ vₐ ],            vₐ = (∂ₐS − Aₐ)/mₐ
//! ∂ₜS      = −[ Σₐ (∂ₐS − Aₐ)²/2mₐ + V
//!               − Σₐ (ħ²/2mₐ)(¼(∂ₐ ln ρ)² + ½ ∂ₐ² ln ρ) ]
//! ```
//!
//! which is the continuity equation and the ρ-corrected Hamilton–Jacobi
//! equation written in log-density variables — `¼(∂u)² + ½∂²u` is exactly
//! `∂²√ρ/√ρ`. The log form keeps Gaussian tails polynomial instead of dividing
//! vanishing numbers, but a genuine node still sends ln ρ to −∞: this solver is
//! a verification instrument that aborts cleanly at node formation.
//!
//! Dropping the ħ² term (`ClassicalFields`) leaves the classical flow of the
//! same initial data, which is how the classical limit is measured.
//!
//! Time stepping is RK4; spatial stencils are 2nd order; the step must respect
//! 0.5·dq²·m/ħ (set `quantum = false` to relax to the advective bound).

use crate::epistemic::{EpistemicState, StateKind};
use crate::error::{Result, SimError};
use crate::expectation::Coeff;
use crate::fields::{DiffOrder, Grid, ScalarField};
use crate::numeric::Accum;
use crate::scalar::Real;

use super::hamiltonian::Hamiltonian;
use super::report::{EvolutionMethod, EvolutionReport};

/// Result of a field-flow run.
#[derive(Clone, Debug)]
pub struct StateEvolution<T> {
    pub state: EpistemicState<T>,
    pub snapshots: Vec<(T, EpistemicState<T>)>,
    pub report: EvolutionReport<T>,
}

/// Quantum Madelung-form evolution (ħ² term on).
pub fn evolve_madelung<T: Real>(
    state0: &EpistemicState<T>,
    h: &Hamiltonian<T>,
    dt: T,
    t_final: T,
    stride: usize,
) -> Result<StateEvolution<T>> {
    evolve_fields(state0, h, dt, t_final, stride, true)
}

/// The same flow with the ħ² term set to zero: classical Hamilton–Jacobi +
/// continuity for the identical initial data.
pub fn evolve_classical_fields<T: Real>(
    state0: &EpistemicState<T>,
    h: &Hamiltonian<T>,
    dt: T,
    t_final: T,
    stride: usize,
) -> Result<StateEvolution<T>> {
    evolve_fields(state0, h, dt, t_final, stride, false)
}

fn evolve_fields<T: Real>(
    state0: &EpistemicState<T>,
    h: &Hamiltonian<T>,
    dt: T,
    t_final: T,
    stride: usize,
    quantum: bool,
) -> Result<StateEvolution<T>> {
    let grid = state0.grid().clone();
    if h.dims() != grid.dims() {
        return Err(SimError::Config("Hamiltonian dimensionality does not match the grid".into()));
    }
    if !(dt > T::zero() && t_final >= T::zero()) {
        return Err(SimError::Config("need dt > 0 and t_final >= 0".into()));
    }
    let hbar = state0.hbar();
    if quantum {
        let bound = T::of(5.0) * h.default_fd_dt(&grid, hbar); // 0.5·dq²·m/ħ
        if dt > bound {
            return Err(SimError::Cfl { dt: dt.to64(), bound: bound.to64() });
        }
    }

    let steps = (t_final / dt).to64().ceil().max(1.0) as usize;
    let dt = t_final / T::of(steps as f64);
    let dv = grid.cell_volume();

    let rho_max0 = state0.rho().max_value();
    let floor = rho_max0 * T::of(1e-120);
    let u0: Vec<T> = state0.rho().values().iter().map(|&r| r.max(floor).ln()).collect();
    let s0: Vec<T> = state0.phase().values().to_vec();
    // Density cells that start alive; node detection watches these.
    let active: Vec<bool> = state0
        .rho()
        .values()
        .iter()
        .map(|&r| r >= T::of(1e-10) * rho_max0)
        .collect();

    let potential: Option<Vec<T>> = match h.potential() {
        Coeff::Const(c) if c.is_zero() => None,
        v => Some((0..grid.len()).map(|idx| v.at(idx)).collect()),
    };

    let kind = if quantum { StateKind::Quantum } else { StateKind::Classical };
    let method = if quantum { EvolutionMethod::Madelung } else { EvolutionMethod::ClassicalFields };
    let mut report = EvolutionReport::new(method);
    let mut snapshots = Vec::new();

    let make_state = |u: &[T], s: &[T]| -> Result<EpistemicState<T>> {
        let rho = ScalarField::new(grid.clone(), u.iter().map(|&x| x.exp()).collect())?;
        let phase = ScalarField::new(grid.clone(), s.to_vec())?;
        Ok(EpistemicState::new_unchecked(rho, phase, kind, hbar))
    };

    let mut u = u0;
    let mut s = s0;
    let diag = |u: &[T], s: &[T], report: &mut EvolutionReport<T>, t: T| -> Result<()> {
        let mut nrm = Accum::new();
        for &x in u {
            nrm.add(x.exp());
        }
        let state = make_state(u, s)?;
        let energy =
            energy_quadrature(&state, h, potential.as_deref(), quantum)?;
        report.push(t, nrm.value() * dv - T::one(), energy);
        Ok(())
    };
    diag(&u, &s, &mut report, T::zero())?;
    if stride > 0 {
        snapshots.push((T::zero(), make_state(&u, &s)?));
    }

    let n = grid.len();
    let mut ku = vec![vec![T::zero(); n]; 4];
    let mut ks = vec![vec![T::zero(); n]; 4];
    let mut ut = vec![T::zero(); n];
    let mut st = vec![T::zero(); n];

    for step in 1..=steps {
        // Classic RK4 over the coupled system.
        rhs(&grid, h, hbar, &u, &s, potential.as_deref(), quantum, &mut ku[0], &mut ks[0])?;
        for (frac, src) in [(T::of(0.5), 0usize), (T::of(0.5), 1), (T::one(), 2)] {
            for i in 0..n {
                ut[i] = u[i] + dt * frac * ku[src][i];
                st[i] = s[i] + dt * frac * ks[src][i];
            }
            let (kud, ksd) = (&mut ku[src + 1], &mut ks[src + 1]);
            rhs(&grid, h, hbar, &ut, &st, potential.as_deref(), quantum, kud, ksd)?;
        }
        let sixth = dt / T::of(6.0);
        for i in 0..n {
            u[i] += sixth * (ku[0][i] + T::of(2.0) * (ku[1][i] + ku[2][i]) + ku[3][i]);
            s[i] += sixth * (ks[0][i] + T::of(2.0) * (ks[1][i] + ks[2][i]) + ks[3][i]);
        }

        // Stability and node watch.
        let mut u_max = T::neg_infinity();
        for &x in &u {
            if !x.is_finite() {
                return Err(SimError::Unstable { step, drift: f64::INFINITY });
            }
            u_max = u_max.max(x);
        }
        let mut u_active_min = T::infinity();
        for (i, &alive) in active.iter().enumerate() {
            if alive {
                u_active_min = u_active_min.min(u[i]);
            }
        }
        if u_active_min - u_max < T::of(-30.0) {
            // An initially live cell dropped below ~1e-13 of the peak.
            return Err(SimError::Node {
                count: 1,
                rho_min: (u_active_min.exp() * T::one()).to64(),
            });
        }

        let t = dt * T::of(step as f64);
        diag(&u, &s, &mut report, t)?;
        if stride > 0 && (step % stride == 0 || step == steps) {
            snapshots.push((t, make_state(&u, &s)?));
        }
    }

    Ok(StateEvolution { state: make_state(&u, &s)?, snapshots, report })
}

#[allow(clippy::too_many_arguments)]
fn rhs<T: Real>(
    grid: &Grid<T>,
    h: &Hamiltonian<T>,
    hbar: T,
    u: &[T],
    s: &[T],
    potential: Option<&[T]>,
    quantum: bool,
    du: &mut [T],
    ds: &mut [T],
) -> Result<()> {
    let n = grid.len();
    for i in 0..n {
        du[i] = T::zero();
        ds[i] = match potential {
            Some(v) => -v[i],
            None => T::zero(),
        };
    }
    let uf = ScalarField::new(grid.clone(), u.to_vec())?;
    let sf = ScalarField::new(grid.clone(), s.to_vec())?;
    let quarter = T::of(0.25);
    let half = T::of(0.5);
    for a in 0..grid.dims() {
        let m = h.masses()[a];
        let ga = h.gauge()[a];
        let inv_m = m.recip();
        let du_a = uf.derivative(a, 1, DiffOrder::Two)?;
        let ds_a = sf.derivative(a, 1, DiffOrder::Two)?;
        let dss_a = sf.derivative(a, 2, DiffOrder::Two)?;
        for i in 0..n {
            let v = (ds_a.values()[i] - ga) * inv_m;
            du[i] -= du_a.values()[i] * v + dss_a.values()[i] * inv_m;
            let w = ds_a.values()[i] - ga;
            ds[i] -= w * w * half * inv_m;
        }
        if quantum {
            let duu_a = uf.derivative(a, 2, DiffOrder::Two)?;
            let c = hbar * hbar * half * inv_m;
            for i in 0..n {
                let g = du_a.values()[i];
                ds[i] += c * (quarter * g * g + half * duu_a.values()[i]);
            }
        }
    }
    Ok(())
}

fn energy_quadrature<T: Real>(
    state: &EpistemicState<T>,
    h: &Hamiltonian<T>,
    potential: Option<&[T]>,
    quantum: bool,
) -> Result<T> {
    // Same integrand as the closed-form engine, but from the live (u, S)
    // buffers at 2nd order — the solver's own running diagnostic.
    let grid = state.grid();
    let rho = state.rho();
    let hbar = state.hbar();
    let mut acc = Accum::new();
    let mut per_axis: Vec<(ScalarField<T>, ScalarField<T>)> = Vec::new();
    let u = rho.map(|r| r.max(rho.max_value() * T::of(1e-120)).ln());
    for a in 0..grid.dims() {
        let du = u.derivative(a, 1, DiffOrder::Two)?;
        let ds = state.phase().derivative(a, 1, DiffOrder::Two)?;
        per_axis.push((du, ds));
    }
    let eighth = T::of(0.125);
    let half = T::of(0.5);
    for (i, &r) in rho.values().iter().enumerate() {
        let mut e = match potential {
            Some(v) => v[i],
            None => T::zero(),
        };
        for (a, (du, ds)) in per_axis.iter().enumerate() {
            let m_inv = h.masses()[a].recip();
            let w = ds.values()[i] - h.gauge()[a];
            e += half * m_inv * w * w;
            if quantum {
                let g = du.values()[i];
                e += eighth * hbar * hbar * m_inv * g * g;
            }
        }
        acc.add(e * r);
    }
    Ok(acc.value() * grid.cell_volume())
}
