//! Unitary integration of iħ∂ₜψ = Ĥψ.
//!
//! Strang splitting between the potential (an exact diagonal phase) and the
//! per-axis kinetic terms, which commute among themselves. Each kinetic
//! factor is applied exactly per axis:
//!
//! * periodic axis — spectrally, by a phase in k-space;
//! * vanishing axis — by a Crank–Nicolson (Cayley) step of the Hermitian
//!   finite-difference kinetic matrix, solved line-by-line (Thomas).
//!
//! Both factors are unitary to round-off, so the norm is conserved without
//! renormalization; the per-step drift is watched and a breach aborts the run.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::epistemic::{from_wavefunction, EpistemicState};
use crate::error::{Result, SimError};
use crate::expectation::Coeff;
use crate::fields::{Boundary, ComplexField, Grid};
use crate::numeric::{Accum, CAccum};
use crate::scalar::Real;

use super::energy::average_energy;
use super::hamiltonian::Hamiltonian;
use super::report::{EvolutionMethod, EvolutionReport};

/// Per-step norm drift beyond which the run aborts.
pub const NORM_DRIFT_TOL: f64 = 1e-10;

/// Result of a Schrödinger run.
#[derive(Clone, Debug)]
pub struct QuantumEvolution<T> {
    pub psi: ComplexField<T>,
    pub snapshots: Vec<(T, ComplexField<T>)>,
    pub report: EvolutionReport<T>,
}

enum AxisKinetic<T> {
    Spectral {
        fwd: Arc<dyn Fft<T>>,
        inv: Arc<dyn Fft<T>>,
        /// exp(−i·dt·(ħk − A)²/(2mħ)) per mode.
        phase: Vec<Complex<T>>,
        /// (ħk − A)²/2m per mode, for the energy diagnostic.
        energy: Vec<T>,
        inv_n: T,
    },
    CrankNicolson {
        /// Off-diagonal and diagonal of H_a (tridiagonal, Hermitian).
        sub: Complex<T>,
        diag: Complex<T>,
        sup: Complex<T>,
        /// dt/(2ħ).
        lambda: T,
    },
}

struct AxisPlan<T> {
    stride: usize,
    points: usize,
    kinetic: AxisKinetic<T>,
}

/// Evolve `psi0` to `t_final`; snapshots every `stride` steps (0 = none, the
/// initial and final states are always included when `stride > 0`).
pub fn evolve_schrodinger<T: Real>(
    psi0: &ComplexField<T>,
    h: &Hamiltonian<T>,
    hbar: T,
    dt: T,
    t_final: T,
    stride: usize,
) -> Result<QuantumEvolution<T>> {
    let grid = psi0.grid().clone();
    if h.dims() != grid.dims() {
        return Err(SimError::Config("Hamiltonian dimensionality does not match the grid".into()));
    }
    if !(dt > T::zero() && t_final >= T::zero()) {
        return Err(SimError::Config("need dt > 0 and t_final >= 0".into()));
    }
    let norm0 = psi0.norm_sq();
    if (norm0 - T::one()).abs() > T::of(crate::NORM_TOL) {
        return Err(SimError::InvalidField("initial wavefunction is not normalized".into()));
    }

    let steps = (t_final / dt).to64().ceil().max(1.0) as usize;
    let dt = t_final / T::of(steps as f64);

    // Exact diagonal potential phase over dt/2.
    let half_phase: Option<Vec<Complex<T>>> = match h.potential() {
        Coeff::Const(c) if c.is_zero() => None,
        v => {
            let f = dt / (T::of(2.0) * hbar);
            Some(
                (0..grid.len())
                    .map(|idx| Complex::from_polar(T::one(), -v.at(idx) * f))
                    .collect(),
            )
        }
    };
    let potential_values: Option<Vec<T>> = match h.potential() {
        Coeff::Const(c) if c.is_zero() => None,
        v => Some((0..grid.len()).map(|idx| v.at(idx)).collect()),
    };

    let mut planner = FftPlanner::<T>::new();
    let mut plans = Vec::with_capacity(grid.dims());
    for a in 0..grid.dims() {
        let ax = &grid.axes()[a];
        let n = ax.points;
        let m = h.masses()[a];
        let ga = h.gauge()[a];
        let kinetic = match ax.boundary {
            Boundary::Periodic => {
                let span = ax.extent();
                let two_pi = T::of(std::f64::consts::TAU);
                let mut phase = Vec::with_capacity(n);
                let mut energy = Vec::with_capacity(n);
                for j in 0..n {
                    let f = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                    let k = two_pi * T::of(f) / span;
                    let hk = hbar * k - ga;
                    let e = hk * hk / (T::of(2.0) * m);
                    energy.push(e);
                    phase.push(Complex::from_polar(T::one(), -e * dt / hbar));
                }
                AxisKinetic::Spectral {
                    fwd: planner.plan_fft_forward(n),
                    inv: planner.plan_fft_inverse(n),
                    phase,
                    energy,
                    inv_n: T::of(1.0 / n as f64),
                }
            }
            Boundary::Vanishing => {
                let hstep = ax.step();
                let b = -hbar * hbar / (T::of(2.0) * m * hstep * hstep);
                // H = −ħ²D₂/2m + iħA·D₁/m + A²/2m (Hermitian tridiagonal).
                let adv = hbar * ga / (T::of(2.0) * m * hstep);
                AxisKinetic::CrankNicolson {
                    sub: Complex::new(b, -adv),
                    sup: Complex::new(b, adv),
                    diag: Complex::new(-T::of(2.0) * b + ga * ga / (T::of(2.0) * m), T::zero()),
                    lambda: dt / (T::of(2.0) * hbar),
                }
            }
        };
        plans.push(AxisPlan { stride: grid.stride(a), points: n, kinetic });
    }

    let mut psi: Vec<Complex<T>> = psi0.values().to_vec();
    let mut scratch: Vec<Complex<T>> = vec![Complex::new(T::zero(), T::zero()); 0];
    let mut report = EvolutionReport::new(EvolutionMethod::Schrodinger);
    let mut snapshots = Vec::new();
    let dv = grid.cell_volume();

    let record = |psi: &[Complex<T>],
                  scratch: &mut Vec<Complex<T>>,
                  plans: &[AxisPlan<T>],
                  report: &mut EvolutionReport<T>,
                  t: T|
     -> Result<T> {
        let mut nrm = Accum::new();
        for v in psi {
            nrm.add(v.norm_sqr());
        }
        let norm = nrm.value() * dv;
        let energy = energy_of(psi, &grid, plans, potential_values.as_deref(), dv, scratch)?;
        report.push(t, norm - T::one(), energy);
        Ok(norm)
    };

    let mut norm_prev = record(&psi, &mut scratch, &plans, &mut report, T::zero())?;
    if stride > 0 {
        snapshots.push((T::zero(), ComplexField::new(grid.clone(), psi.clone())?));
    }

    for step in 1..=steps {
        if let Some(ph) = &half_phase {
            for (v, p) in psi.iter_mut().zip(ph) {
                *v *= *p;
            }
        }
        for plan in &plans {
            apply_kinetic(&mut psi, &grid, plan, &mut scratch)?;
        }
        if let Some(ph) = &half_phase {
            for (v, p) in psi.iter_mut().zip(ph) {
                *v *= *p;
            }
        }
        let t = dt * T::of(step as f64);
        let norm = record(&psi, &mut scratch, &plans, &mut report, t)?;
        let drift = (norm - norm_prev).abs();
        if drift > T::of(NORM_DRIFT_TOL) {
            return Err(SimError::Unstable { step, drift: drift.to64() });
        }
        norm_prev = norm;
        if stride > 0 && (step % stride == 0 || step == steps) {
            snapshots.push((t, ComplexField::new(grid.clone(), psi.clone())?));
        }
    }

    Ok(QuantumEvolution {
        psi: ComplexField::new(grid, psi)?,
        snapshots,
        report,
    })
}

fn for_each_line<T: Real>(
    grid: &Grid<T>,
    plan: &AxisPlan<T>,
    mut f: impl FnMut(usize) -> Result<()>,
) -> Result<()> {
    let n = plan.points;
    let stride = plan.stride;
    let outer = grid.len() / (n * stride);
    for o in 0..outer {
        for s in 0..stride {
            f(o * n * stride + s)?;
        }
    }
    Ok(())
}

fn apply_kinetic<T: Real>(
    psi: &mut [Complex<T>],
    grid: &Grid<T>,
    plan: &AxisPlan<T>,
    scratch: &mut Vec<Complex<T>>,
) -> Result<()> {
    let n = plan.points;
    let stride = plan.stride;
    scratch.resize(n, Complex::new(T::zero(), T::zero()));
    match &plan.kinetic {
        AxisKinetic::Spectral { fwd, inv, phase, inv_n, .. } => {
            for_each_line(grid, plan, |base| {
                for (k, s) in scratch.iter_mut().enumerate() {
                    *s = psi[base + k * stride];
                }
                fwd.process(scratch);
                for (s, ph) in scratch.iter_mut().zip(phase) {
                    *s *= *ph;
                }
                inv.process(scratch);
                for (k, s) in scratch.iter().enumerate() {
                    psi[base + k * stride] = *s * *inv_n;
                }
                Ok(())
            })
        }
        AxisKinetic::CrankNicolson { sub, diag, sup, lambda } => {
            let il = Complex::new(T::zero(), *lambda);
            // (1 + iλH) x = (1 − iλH) ψ, Thomas solve per line.
            let a = il * *sub; // sub-diagonal of LHS
            let c = il * *sup; // super-diagonal of LHS
            let b = Complex::new(T::one(), T::zero()) + il * *diag;
            let mut cp = vec![Complex::new(T::zero(), T::zero()); n];
            let mut dp = vec![Complex::new(T::zero(), T::zero()); n];
            for_each_line(grid, plan, |base| {
                // RHS = (1 − iλH) ψ.
                for k in 0..n {
                    let v = psi[base + k * stride];
                    let mut r = v - il * (*diag * v);
                    if k > 0 {
                        r -= il * (*sub * psi[base + (k - 1) * stride]);
                    }
                    if k + 1 < n {
                        r -= il * (*sup * psi[base + (k + 1) * stride]);
                    }
                    scratch[k] = r;
                }
                // Thomas forward sweep.
                cp[0] = c / b;
                dp[0] = scratch[0] / b;
                for k in 1..n {
                    let denom = b - a * cp[k - 1];
                    cp[k] = c / denom;
                    dp[k] = (scratch[k] - a * dp[k - 1]) / denom;
                }
                // Back substitution.
                psi[base + (n - 1) * stride] = dp[n - 1];
                for k in (0..n - 1).rev() {
                    psi[base + k * stride] = dp[k] - cp[k] * psi[base + (k + 1) * stride];
                }
                Ok(())
            })
        }
    }
}

/// ⟨ψ|Ĥ|ψ⟩ via the solver's own kinetic representation (spectral multiplier
/// or tridiagonal apply) plus the potential quadrature.
fn energy_of<T: Real>(
    psi: &[Complex<T>],
    grid: &Grid<T>,
    plans: &[AxisPlan<T>],
    potential: Option<&[T]>,
    dv: T,
    scratch: &mut Vec<Complex<T>>,
) -> Result<T> {
    let mut acc = CAccum::new();
    for plan in plans {
        let n = plan.points;
        let stride = plan.stride;
        scratch.resize(n, Complex::new(T::zero(), T::zero()));
        match &plan.kinetic {
            AxisKinetic::Spectral { fwd, energy, .. } => {
                for_each_line(grid, plan, |base| {
                    for (k, s) in scratch.iter_mut().enumerate() {
                        *s = psi[base + k * stride];
                    }
                    fwd.process(scratch);
                    let mut line = Accum::new();
                    for (s, &e) in scratch.iter().zip(energy) {
                        line.add(s.norm_sqr() * e);
                    }
                    // Parseval: Σ|ψ̂|²/n = Σ|ψ|².
                    acc.add(Complex::new(line.value() / T::of(n as f64), T::zero()));
                    Ok(())
                })?;
            }
            AxisKinetic::CrankNicolson { sub, diag, sup, .. } => {
                for_each_line(grid, plan, |base| {
                    for k in 0..n {
                        let v = psi[base + k * stride];
                        let mut hv = *diag * v;
                        if k > 0 {
                            hv += *sub * psi[base + (k - 1) * stride];
                        }
                        if k + 1 < n {
                            hv += *sup * psi[base + (k + 1) * stride];
                        }
                        acc.add(psi[base + k * stride].conj() * hv);
                    }
                    Ok(())
                })?;
            }
        }
    }
    let mut total = acc.value().re * dv;
    if let Some(v) = potential {
        let mut pot = Accum::new();
        for (p, &vv) in psi.iter().zip(v) {
            pot.add(p.norm_sqr() * vv);
        }
        total += pot.value() * dv;
    }
    Ok(total)
}

/// Eq.-of-state energy series over stored snapshots: maps each ψ back to
/// (ρ, S) and applies the phase-space energy quadrature.
pub fn quantum_energy_series<T: Real>(
    snapshots: &[(T, ComplexField<T>)],
    h: &Hamiltonian<T>,
    hbar: T,
) -> Result<Vec<(T, T)>> {
    let mut out = Vec::with_capacity(snapshots.len());
    for (t, psi) in snapshots {
        let (state, _) = from_wavefunction(psi, hbar)?;
        out.push((*t, average_energy(&state, h)?));
    }
    Ok(out)
}

/// Map snapshots to epistemic states.
pub fn snapshots_to_states<T: Real>(
    snapshots: &[(T, ComplexField<T>)],
    hbar: T,
) -> Result<Vec<(T, EpistemicState<T>)>> {
    snapshots
        .iter()
        .map(|(t, psi)| from_wavefunction(psi, hbar).map(|(s, _)| (*t, s)))
        .collect()
}
