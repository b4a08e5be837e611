//! Uncertainty products σ_q·σ_p.
//!
//! The closed route takes σ_q from ρ by quadrature and σ_p from the
//! ξ-integrated variance `∫(∂S − ⟨p⟩)²ρ + ∫((ħ/2)∂ρ/ρ)²ρ`. The product obeys
//! σ_q·σ_p ≥ ħ/2 through the Cauchy–Schwarz chain
//!
//! ```text
//! σ_q² · ∫((ħ/2)·∂ρ/ρ)² ρ ≥ ħ²/4      and      σ_p² ≥ ∫((ħ/2)·∂ρ/ρ)² ρ,
//! ```
//!
//! both of which are exposed for direct numerical verification.

use crate::epistemic::{for_each_sample, EpistemicState, XiModel};
use crate::error::Result;
use crate::fields::DiffOrder;
use crate::numeric::Accum;
use crate::scalar::Real;

use super::engines::{density_weighted, fisher_term, mean_momentum};

/// Closed-form uncertainty data for one axis.
#[derive(Copy, Clone, Debug)]
pub struct UncertaintyReport<T> {
    pub mean_q: T,
    pub sigma_q: T,
    pub mean_p: T,
    pub sigma_p: T,
    pub product: T,
    /// `∫((ħ/2)·∂ρ/ρ)²ρ dq` — the ξ-fluctuation part of σ_p².
    pub fisher: T,
}

/// σ_q, σ_p, and their product by quadrature.
pub fn uncertainty_product<T: Real>(
    state: &EpistemicState<T>,
    axis: usize,
) -> Result<UncertaintyReport<T>> {
    let mean_q = state.mean_position(axis)?;
    let var_q = state.position_variance(axis)?;
    let mean_p = mean_momentum(state, axis)?;
    let gs = state.phase_gradient(axis, DiffOrder::Four)?;
    let dev = gs.map(|v| (v - mean_p) * (v - mean_p));
    let drift = density_weighted(state, &dev)?;
    let fisher = fisher_term(state, axis)?;
    let sigma_q = var_q.sqrt();
    let sigma_p = (drift + fisher).sqrt();
    Ok(UncertaintyReport {
        mean_q,
        sigma_q,
        mean_p,
        sigma_p,
        product: sigma_q * sigma_p,
        fisher,
    })
}

/// Monte Carlo uncertainty data for one axis.
#[derive(Copy, Clone, Debug)]
pub struct McUncertaintyReport<T> {
    pub sigma_q: T,
    pub sigma_q_stderr: T,
    pub sigma_p: T,
    pub sigma_p_stderr: T,
    pub product: T,
    pub product_stderr: T,
    pub n: usize,
}

/// Sample-based σ_q, σ_p over `n` draws of (q, ξ, p).
///
/// Standard errors come from the central fourth moments, so they stay honest
/// for non-Gaussian momentum distributions.
pub fn uncertainty_product_mc<T: Real>(
    state: &EpistemicState<T>,
    model: &XiModel<T>,
    axis: usize,
    n: usize,
) -> Result<McUncertaintyReport<T>> {
    let mut qm = [Accum::new(); 4];
    let mut pm = [Accum::new(); 4];
    for_each_sample(state, model, n, |q, _, p| {
        let qa = q[axis];
        let pa = p[axis];
        let mut qpow = T::one();
        let mut ppow = T::one();
        for k in 0..4 {
            qpow *= qa;
            ppow *= pa;
            qm[k].add(qpow);
            pm[k].add(ppow);
        }
    })?;
    let nf = T::of(n as f64);
    let var_of = |m: &[Accum<T>; 4]| -> (T, T) {
        let r1 = m[0].value() / nf;
        let r2 = m[1].value() / nf;
        let r3 = m[2].value() / nf;
        let r4 = m[3].value() / nf;
        let var = (r2 - r1 * r1).max(T::zero());
        // Central fourth moment from raw moments.
        let mu4 = r4 - T::of(4.0) * r1 * r3 + T::of(6.0) * r1 * r1 * r2 - T::of(3.0) * r1.powi(4);
        let se_var = ((mu4 - var * var).max(T::zero()) / nf).sqrt();
        (var, se_var)
    };
    let (var_q, se_var_q) = var_of(&qm);
    let (var_p, se_var_p) = var_of(&pm);
    let sigma_q = var_q.sqrt();
    let sigma_p = var_p.sqrt();
    let se_q = se_var_q / (T::of(2.0) * sigma_q);
    let se_p = se_var_p / (T::of(2.0) * sigma_p);
    let product = sigma_q * sigma_p;
    let product_stderr = ((sigma_p * se_q).powi(2) + (sigma_q * se_p).powi(2)).sqrt();
    Ok(McUncertaintyReport {
        sigma_q,
        sigma_q_stderr: se_q,
        sigma_p,
        sigma_p_stderr: se_p,
        product,
        product_stderr,
        n,
    })
}

/// The Cauchy–Schwarz chain data: (σ_q², F, σ_p²) with
/// F = ∫((ħ/2)∂ρ/ρ)²ρ. The chain asserts σ_q²·F ≥ ħ²/4 and σ_p² ≥ F.
pub fn uncertainty_chain<T: Real>(state: &EpistemicState<T>, axis: usize) -> Result<(T, T, T)> {
    let report = uncertainty_product(state, axis)?;
    Ok((report.sigma_q * report.sigma_q, report.fisher, report.sigma_p * report.sigma_p))
}
