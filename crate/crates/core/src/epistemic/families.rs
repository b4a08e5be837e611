//! Named state families used by scenarios and tests.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Result, SimError};
use crate::fields::{Boundary, ComplexField, Grid, ScalarField};
use crate::scalar::Real;

use super::state::{EpistemicState, StateKind};

fn require_dims<T: Real>(grid: &Grid<T>, dims: usize, what: &str) -> Result<()> {
    if grid.dims() != dims {
        return Err(SimError::Config(format!("{what} expects a {dims}-dimensional grid")));
    }
    Ok(())
}

/// Gaussian density of width `sigma` about `center`, constant phase.
pub fn gaussian_state<T: Real>(
    grid: &Grid<T>,
    sigma: T,
    center: T,
    hbar: T,
) -> Result<EpistemicState<T>> {
    require_dims(grid, 1, "gaussian_state")?;
    let inv = (T::of(2.0) * sigma * sigma).recip();
    let rho = ScalarField::from_fn(grid.clone(), |q| {
        let d = q[0] - center;
        (-d * d * inv).exp()
    });
    EpistemicState::from_unnormalized(rho, ScalarField::zeros(grid.clone()), StateKind::Quantum, hbar)
}

/// Ground state of a box spanning the whole (vanishing) grid:
/// ρ = (2/L)·cos²(π(q − mid)/L), constant phase.
pub fn box_ground_state<T: Real>(grid: &Grid<T>, hbar: T) -> Result<EpistemicState<T>> {
    require_dims(grid, 1, "box_ground_state")?;
    let ax = &grid.axes()[0];
    let span = ax.extent();
    let mid = (ax.lower + ax.upper) * T::of(0.5);
    let pi = T::PI();
    let rho = ScalarField::from_fn(grid.clone(), |q| {
        let c = (pi * (q[0] - mid) / span).cos();
        T::of(2.0) / span * c * c
    });
    EpistemicState::from_unnormalized(rho, ScalarField::zeros(grid.clone()), StateKind::Quantum, hbar)
}

/// Uniform density with linear phase `S = p₀·q` on a periodic grid;
/// `p₀ = 2πħ·winding / L` keeps ψ single-valued across the seam.
pub fn plane_wave_state<T: Real>(grid: &Grid<T>, winding: i64, hbar: T) -> Result<EpistemicState<T>> {
    require_dims(grid, 1, "plane_wave_state")?;
    let ax = &grid.axes()[0];
    if ax.boundary != Boundary::Periodic {
        return Err(SimError::Config("plane_wave_state needs a periodic grid".into()));
    }
    let span = ax.extent();
    let p0 = T::of(2.0) * T::PI() * hbar * T::of(winding as f64) / span;
    let rho = ScalarField::constant(grid.clone(), span.recip());
    let phase = ScalarField::from_fn(grid.clone(), |q| p0 * q[0]);
    EpistemicState::from_unnormalized(rho, phase, StateKind::Quantum, hbar)
}

/// Momentum carried by [`plane_wave_state`] for the same arguments.
pub fn plane_wave_momentum<T: Real>(grid: &Grid<T>, winding: i64, hbar: T) -> T {
    let span = grid.axes()[0].extent();
    T::of(2.0) * T::PI() * hbar * T::of(winding as f64) / span
}

/// Normalized complex Gaussian packet of width `sigma` about `center`
/// carrying momentum `p0`.
pub fn gaussian_packet<T: Real>(
    grid: &Grid<T>,
    sigma: T,
    center: T,
    p0: T,
    hbar: T,
) -> Result<ComplexField<T>> {
    require_dims(grid, 1, "gaussian_packet")?;
    let inv = (T::of(4.0) * sigma * sigma).recip();
    let inv_h = hbar.recip();
    let psi = ComplexField::from_fn(grid.clone(), |q| {
        let d = q[0] - center;
        let amp = (-d * d * inv).exp();
        let th = p0 * q[0] * inv_h;
        Complex::new(amp * th.cos(), amp * th.sin())
    });
    psi.normalized()
}

/// Harmonic-oscillator coherent state: the ground-state packet displaced to
/// `q0` (width √(ħ/2mω), zero initial momentum).
pub fn coherent_state<T: Real>(
    grid: &Grid<T>,
    mass: T,
    omega: T,
    q0: T,
    hbar: T,
) -> Result<ComplexField<T>> {
    let sigma = (hbar / (T::of(2.0) * mass * omega)).sqrt();
    gaussian_packet(grid, sigma, q0, T::zero(), hbar)
}

/// Two-particle real entangled Gaussian:
/// ρ ∝ exp(−(q₁−q₂)²/2a² − (q₁+q₂)²/2b²), constant phase.
pub fn entangled_gaussian_pair<T: Real>(
    grid: &Grid<T>,
    a: T,
    b: T,
    hbar: T,
) -> Result<EpistemicState<T>> {
    require_dims(grid, 2, "entangled_gaussian_pair")?;
    let ia = (T::of(2.0) * a * a).recip();
    let ib = (T::of(2.0) * b * b).recip();
    let rho = ScalarField::from_fn(grid.clone(), |q| {
        let u = q[0] - q[1];
        let v = q[0] + q[1];
        (-u * u * ia - v * v * ib).exp()
    });
    EpistemicState::from_unnormalized(rho, ScalarField::zeros(grid.clone()), StateKind::Quantum, hbar)
}

/// Options for [`random_smooth_state`].
#[derive(Clone, Debug)]
pub struct RandomStateOptions {
    /// Highest Fourier mode entering ρ and S.
    pub max_mode: usize,
    /// Coefficient scale of the log-density modes.
    pub rho_amplitude: f64,
    /// Coefficient scale of the phase modes, in units of ħ.
    pub phase_amplitude: f64,
    /// Allow a winding (plane-wave) component in the phase.
    pub allow_winding: bool,
}

impl Default for RandomStateOptions {
    fn default() -> Self {
        Self { max_mode: 3, rho_amplitude: 0.5, phase_amplitude: 0.8, allow_winding: true }
    }
}

/// Random smooth node-free state on a periodic 1-D grid:
/// ρ ∝ exp(Σ low Fourier modes), S = 2πħW·q/L + ħ·(Σ low Fourier modes).
pub fn random_smooth_state<T: Real, R: Rng + ?Sized>(
    grid: &Grid<T>,
    hbar: T,
    opts: &RandomStateOptions,
    rng: &mut R,
) -> Result<EpistemicState<T>> {
    require_dims(grid, 1, "random_smooth_state")?;
    if grid.axes()[0].boundary != Boundary::Periodic {
        return Err(SimError::Config("random_smooth_state needs a periodic grid".into()));
    }
    let span = grid.axes()[0].extent();
    let two_pi = T::of(std::f64::consts::TAU);
    let mut rho_coef = Vec::new();
    let mut s_coef = Vec::new();
    for _ in 1..=opts.max_mode {
        let u = |rng: &mut R, amp: f64| T::of(amp * 2.0) * (T::unit_uniform(rng) - T::of(0.5));
        rho_coef.push((u(rng, opts.rho_amplitude), u(rng, opts.rho_amplitude)));
        s_coef.push((u(rng, opts.phase_amplitude), u(rng, opts.phase_amplitude)));
    }
    let winding: i64 = if opts.allow_winding {
        (rng.random_range(0..3i64)) - 1
    } else {
        0
    };
    let p0 = two_pi * hbar * T::of(winding as f64) / span;
    let rho = ScalarField::from_fn(grid.clone(), |q| {
        let x = two_pi * q[0] / span;
        let mut e = T::zero();
        for (k, (a, b)) in rho_coef.iter().enumerate() {
            let kk = T::of((k + 1) as f64);
            e += *a * (kk * x).cos() + *b * (kk * x).sin();
        }
        e.exp()
    });
    let phase = ScalarField::from_fn(grid.clone(), |q| {
        let x = two_pi * q[0] / span;
        let mut s = p0 * q[0];
        for (k, (a, b)) in s_coef.iter().enumerate() {
            let kk = T::of((k + 1) as f64);
            s += hbar * (*a * (kk * x).cos() + *b * (kk * x).sin());
        }
        s
    });
    EpistemicState::from_unnormalized(rho, phase, StateKind::Quantum, hbar)
}

/// Random smooth localized state on a vanishing 1-D grid: a wide envelope
/// tapering to ~0 at the edges times gentle modes, with a tapered phase.
pub fn random_localized_state<T: Real, R: Rng + ?Sized>(
    grid: &Grid<T>,
    hbar: T,
    opts: &RandomStateOptions,
    rng: &mut R,
) -> Result<EpistemicState<T>> {
    require_dims(grid, 1, "random_localized_state")?;
    let ax = &grid.axes()[0];
    let mid = (ax.lower + ax.upper) * T::of(0.5);
    let half = ax.extent() * T::of(0.5);
    let w = half * T::of(0.25 + 0.15 * T::unit_uniform(rng).to64());
    let two_pi = T::of(std::f64::consts::TAU);
    let mut rho_coef = Vec::new();
    let mut s_coef = Vec::new();
    for _ in 1..=opts.max_mode {
        let u = |rng: &mut R, amp: f64| T::of(amp * 2.0) * (T::unit_uniform(rng) - T::of(0.5));
        rho_coef.push((u(rng, opts.rho_amplitude), u(rng, opts.rho_amplitude)));
        s_coef.push((u(rng, opts.phase_amplitude), u(rng, opts.phase_amplitude)));
    }
    let span = ax.extent();
    let rho = ScalarField::from_fn(grid.clone(), |q| {
        let d = (q[0] - mid) / w;
        let x = two_pi * q[0] / span;
        let mut e = -d * d * T::of(0.5);
        for (k, (a, b)) in rho_coef.iter().enumerate() {
            let kk = T::of((k + 1) as f64);
            e += *a * (kk * x).cos() + *b * (kk * x).sin();
        }
        e.exp()
    });
    let phase = ScalarField::from_fn(grid.clone(), |q| {
        let x = two_pi * q[0] / span;
        let mut s = T::zero();
        for (k, (a, b)) in s_coef.iter().enumerate() {
            let kk = T::of((k + 1) as f64);
            s += hbar * (*a * (kk * x).cos() + *b * (kk * x).sin());
        }
        s
    });
    EpistemicState::from_unnormalized(rho, phase, StateKind::Quantum, hbar)
}
