//! The three expectation engines.
//!
//! 1. `ensemble_average_mc` — Monte Carlo over (q, ξ) with the restricted
//!    momentum law; the estimator the ontological model actually defines.
//! 2. `ensemble_average_closed` — the ξ-integrated phase-space quadrature:
//!    the ξ-cross terms die with the first moment, the ξ² terms keep ħ²,
//!    leaving `∫ρ[½gⁱʲvᵢvⱼ + bᵢ∂ᵢS + V + (ħ²/8)gⁱʲ(∂ᵢρ/ρ)(∂ⱼρ/ρ)]`,
//!    with vᵢ = ∂ᵢS − Aᵢ.
//! 3. `quantum_expectation` — the operator quadrature
//!    `∫ψ*[½(−iħ∂ᵢ−Aᵢ)gⁱʲ(−iħ∂ⱼ−Aⱼ) + ½(bᵢ(−iħ∂ᵢ)+(−iħ∂ᵢ)bᵢ) + V]ψ`,
//!    with the metric sandwiched between the two momentum factors. The full
//!    complex value is returned; the imaginary part is a pure discretization
//!    residual that must vanish under refinement.
//!
//! All three agree for every node-free state — the model's central claim —
//! and the acceptance suite checks them against one another.

use num_complex::Complex;
use rayon::prelude::*;

use crate::epistemic::{check_hbar, draw_one, CellSampler, EpistemicState, XiModel};
use crate::error::{Result, SimError};
use crate::fields::{ComplexField, DiffOrder, ScalarField};
use crate::numeric::Accum;
use crate::rng::{substream, BATCH};
use crate::scalar::Real;
use crate::NODE_EPS_REL;

use super::observable::{Coeff, QuadraticObservable};

/// Monte Carlo estimate with its standard error.
#[derive(Copy, Clone, Debug)]
pub struct McEstimate<T> {
    pub value: T,
    pub stderr: T,
    pub n: usize,
}

impl<T: Real> McEstimate<T> {
    /// |value − other| in units of the combined standard error.
    pub fn sigmas_from(&self, truth: T) -> T {
        (self.value - truth).abs() / self.stderr
    }
}

/// Sample mean of `O` over `n` draws of (q, ξ, p).
///
/// Work is split into fixed batches, one seeded substream per batch, partial
/// sums are compensated and merged in batch order: the result is bit-identical
/// for any worker count.
pub fn ensemble_average_mc<T: Real>(
    obs: &QuadraticObservable<T>,
    state: &EpistemicState<T>,
    model: &XiModel<T>,
    n: usize,
) -> Result<McEstimate<T>> {
    if n < 2 {
        return Err(SimError::Config("Monte Carlo averaging needs n >= 2".into()));
    }
    check_hbar(state, model)?;
    obs.check_grid(state.grid())?;
    if obs.dims() != state.grid().dims() {
        return Err(SimError::Config(format!(
            "observable '{}' has {} degrees of freedom, state has {}",
            obs.label(),
            obs.dims(),
            state.grid().dims()
        )));
    }
    let law = state.momentum_law()?;
    let sampler = CellSampler::new(state.rho())?;
    let dims = state.grid().dims();
    let batches = n.div_ceil(BATCH);
    let partials: Vec<Result<(Accum<T>, Accum<T>)>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(model.seed(), b as u64);
            let take = BATCH.min(n - b * BATCH);
            let mut q = vec![T::zero(); dims];
            let mut p = vec![T::zero(); dims];
            let mut sum = Accum::new();
            let mut sumsq = Accum::new();
            for _ in 0..take {
                draw_one(&sampler, &law, model, &mut rng, &mut q, &mut p)?;
                let o = obs.evaluate(&q, &p)?;
                sum.add(o);
                sumsq.add(o * o);
            }
            Ok((sum, sumsq))
        })
        .collect();
    let mut sum = Accum::new();
    let mut sumsq = Accum::new();
    for part in partials {
        let (s, ss) = part?;
        sum.merge(&s);
        sumsq.merge(&ss);
    }
    let nf = T::of(n as f64);
    let mean = sum.value() / nf;
    let var = ((sumsq.value() / nf - mean * mean) * nf / (nf - T::one())).max(T::zero());
    Ok(McEstimate { value: mean, stderr: (var / nf).sqrt(), n })
}

/// ξ-integrated phase-space quadrature of `O` (4th-order stencils).
pub fn ensemble_average_closed<T: Real>(
    obs: &QuadraticObservable<T>,
    state: &EpistemicState<T>,
) -> Result<T> {
    ensemble_average_closed_with_order(obs, state, DiffOrder::Four)
}

pub fn ensemble_average_closed_with_order<T: Real>(
    obs: &QuadraticObservable<T>,
    state: &EpistemicState<T>,
    order: DiffOrder,
) -> Result<T> {
    closed_integral(obs, state, order, true)
}

/// Phase-space average without the ξ-fluctuation term: the value conventional
/// classical statistical mechanics assigns, `∫ρ[½gⁱʲvᵢvⱼ + bᵢ∂ᵢS + V]`.
pub fn ensemble_average_classical<T: Real>(
    obs: &QuadraticObservable<T>,
    state: &EpistemicState<T>,
) -> Result<T> {
    closed_integral(obs, state, DiffOrder::Four, false)
}

pub(crate) fn closed_integral<T: Real>(
    obs: &QuadraticObservable<T>,
    state: &EpistemicState<T>,
    order: DiffOrder,
    xi_fluctuations: bool,
) -> Result<T> {
    obs.check_grid(state.grid())?;
    let dims = state.grid().dims();
    if obs.dims() != dims {
        return Err(SimError::Config(format!(
            "observable '{}' has {} degrees of freedom, state has {}",
            obs.label(),
            obs.dims(),
            dims
        )));
    }
    let mut grad_s = Vec::with_capacity(dims);
    let mut dlog = Vec::with_capacity(dims);
    for a in 0..dims {
        grad_s.push(state.phase_gradient(a, order)?);
        if xi_fluctuations {
            dlog.push(state.log_density_gradient(a, order)?);
        }
    }
    let rho = state.rho();
    let eps = T::of(NODE_EPS_REL) * rho.max_value();
    let h8 = state.hbar() * state.hbar() / T::of(8.0);
    let half = T::of(0.5);
    let mut acc = Accum::new();
    for (idx, &r) in rho.values().iter().enumerate() {
        if r <= eps {
            continue;
        }
        let mut o = obs.potential().at(idx);
        for i in 0..dims {
            let bi = obs.linear(i);
            if !bi.is_zero() {
                o += bi.at(idx) * grad_s[i].values()[idx];
            }
            for j in 0..dims {
                let gij = obs.metric(i, j);
                if gij.is_zero() {
                    continue;
                }
                let g = gij.at(idx);
                let vi = grad_s[i].values()[idx] - obs.gauge(i).at(idx);
                let vj = grad_s[j].values()[idx] - obs.gauge(j).at(idx);
                o += half * g * vi * vj;
                if xi_fluctuations {
                    o += h8 * g * dlog[i].values()[idx] * dlog[j].values()[idx];
                }
            }
        }
        acc.add(o * r);
    }
    Ok(acc.value() * state.grid().cell_volume())
}

/// Operator quadrature `⟨ψ|Ô|ψ⟩` in position representation (4th-order
/// stencils). Real part is the expectation; the imaginary part measures
/// discretization only.
pub fn quantum_expectation<T: Real>(
    obs: &QuadraticObservable<T>,
    psi: &ComplexField<T>,
    hbar: T,
) -> Result<Complex<T>> {
    quantum_expectation_with_order(obs, psi, hbar, DiffOrder::Four)
}

pub fn quantum_expectation_with_order<T: Real>(
    obs: &QuadraticObservable<T>,
    psi: &ComplexField<T>,
    hbar: T,
    order: DiffOrder,
) -> Result<Complex<T>> {
    obs.check_grid(psi.grid())?;
    let dims = psi.grid().dims();
    if obs.dims() != dims {
        return Err(SimError::Config(format!(
            "observable '{}' has {} degrees of freedom, field has {}",
            obs.label(),
            obs.dims(),
            dims
        )));
    }
    let n = psi.grid().len();
    let minus_i_hbar = Complex::new(T::zero(), -hbar);

    // Π_j ψ = (−iħ∂_j − A_j) ψ for every axis.
    let mut pi_psi: Vec<ComplexField<T>> = Vec::with_capacity(dims);
    for j in 0..dims {
        let d = psi.derivative(j, 1, order)?;
        let a = obs.gauge(j);
        let mut vals = Vec::with_capacity(n);
        for idx in 0..n {
            vals.push(minus_i_hbar * d.values()[idx] - psi.values()[idx] * a.at(idx));
        }
        pi_psi.push(ComplexField::new(psi.grid().clone(), vals)?);
    }

    let mut opsi = vec![Complex::new(T::zero(), T::zero()); n];

    // Quadratic part: ½ Σᵢ Πᵢ (Σⱼ gⁱʲ Πⱼ ψ).
    let half = T::of(0.5);
    for i in 0..dims {
        let mut w = vec![Complex::new(T::zero(), T::zero()); n];
        let mut any = false;
        for j in 0..dims {
            let gij = obs.metric(i, j);
            if gij.is_zero() {
                continue;
            }
            any = true;
            for idx in 0..n {
                w[idx] += pi_psi[j].values()[idx] * gij.at(idx);
            }
        }
        if !any {
            continue;
        }
        let w = ComplexField::new(psi.grid().clone(), w)?;
        let dw = w.derivative(i, 1, order)?;
        let a = obs.gauge(i);
        for idx in 0..n {
            opsi[idx] += (minus_i_hbar * dw.values()[idx] - w.values()[idx] * a.at(idx)) * half;
        }
    }

    // Linear part, symmetric ordering: ½ (bᵢ·(−iħ∂ᵢψ) + (−iħ∂ᵢ)(bᵢψ)).
    for i in 0..dims {
        let bi = obs.linear(i);
        if bi.is_zero() {
            continue;
        }
        let d = psi.derivative(i, 1, order)?;
        let bpsi_vals: Vec<Complex<T>> =
            (0..n).map(|idx| psi.values()[idx] * bi.at(idx)).collect();
        let bpsi = ComplexField::new(psi.grid().clone(), bpsi_vals)?;
        let dbpsi = bpsi.derivative(i, 1, order)?;
        for idx in 0..n {
            opsi[idx] +=
                (d.values()[idx] * bi.at(idx) + dbpsi.values()[idx]) * minus_i_hbar * half;
        }
    }

    // Potential.
    match obs.potential() {
        Coeff::Const(c) if c.is_zero() => {}
        v => {
            for (idx, o) in opsi.iter_mut().enumerate() {
                *o += psi.values()[idx] * v.at(idx);
            }
        }
    }

    psi.inner(&ComplexField::new(psi.grid().clone(), opsi)?)
}

/// Integrand-level helper: `∫ (∂S)·ρ` for one axis — the ensemble mean
/// momentum (4th-order stencils).
pub fn mean_momentum<T: Real>(state: &EpistemicState<T>, axis: usize) -> Result<T> {
    let gs = state.phase_gradient(axis, DiffOrder::Four)?;
    state.rho().integrate_with(&gs)
}

/// `∫ ((ħ/2)·∂ρ/ρ)² ρ dq` for one axis: the ξ-fluctuation contribution to the
/// momentum variance and the lower-bound side of the uncertainty chain.
pub fn fisher_term<T: Real>(state: &EpistemicState<T>, axis: usize) -> Result<T> {
    let dlog = state.log_density_gradient(axis, DiffOrder::Four)?;
    let rho = state.rho();
    let eps = T::of(NODE_EPS_REL) * rho.max_value();
    let half_h = state.hbar() * T::of(0.5);
    let mut acc = Accum::new();
    for (idx, &r) in rho.values().iter().enumerate() {
        if r <= eps {
            continue;
        }
        let v = half_h * dlog.values()[idx];
        acc.add(v * v * r);
    }
    Ok(acc.value() * state.grid().cell_volume())
}

/// Scalar-field convenience: `∫ f ρ dq` skipping negligible-density points.
pub fn density_weighted<T: Real>(state: &EpistemicState<T>, f: &ScalarField<T>) -> Result<T> {
    state.rho().check_same_grid(f)?;
    let rho = state.rho();
    let eps = T::of(NODE_EPS_REL) * rho.max_value();
    let mut acc = Accum::new();
    for (idx, &r) in rho.values().iter().enumerate() {
        if r <= eps {
            continue;
        }
        acc.add(f.values()[idx] * r);
    }
    Ok(acc.value() * state.grid().cell_volume())
}
