//! Drawing ontic samples (q, ξ, p) from an epistemic state.
//!
//! Positions are drawn exactly from the piecewise-constant density carried by
//! the grid: a cell is picked by inverse CDF over cell masses (any dimension),
//! then the position is uniform within the cell. ξ comes from its law, and the
//! momentum is pinned by the restricted momentum law — never sampled freely.
//!
//! Sampling is batched: batch `b` consumes substream `b` of the model seed, so
//! any partitioning of the work reproduces the same ensemble.

use rand::Rng;

use crate::error::{Result, SimError};
use crate::fields::{Grid, ScalarField};
use crate::rng::{substream, BATCH};
use crate::scalar::Real;

use super::state::{EpistemicState, MomentumLaw};
use super::xi::XiModel;

/// One draw of the model's ontic variables.
#[derive(Clone, Debug)]
pub struct OnticSample<T> {
    pub q: Vec<T>,
    pub xi: T,
    pub p: Vec<T>,
}

/// Exact sampler for the piecewise-constant density over grid cells.
#[derive(Clone, Debug)]
pub struct CellSampler<T> {
    grid: Grid<T>,
    cdf: Vec<T>,
}

impl<T: Real> CellSampler<T> {
    pub fn new(rho: &ScalarField<T>) -> Result<Self> {
        let mut cdf = Vec::with_capacity(rho.values().len());
        let mut acc = T::zero();
        for &v in rho.values() {
            if v < T::zero() {
                return Err(SimError::InvalidField("negative density".into()));
            }
            acc += v;
            cdf.push(acc);
        }
        if !(acc.is_finite() && acc > T::zero()) {
            return Err(SimError::NonNormalizable);
        }
        let inv = acc.recip();
        for v in &mut cdf {
            *v *= inv;
        }
        Ok(Self { grid: rho.grid().clone(), cdf })
    }

    /// Draw one position into `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [T]) {
        let u = T::unit_uniform(rng);
        let cell = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        for (a, o) in out.iter_mut().enumerate() {
            let ax = &self.grid.axes()[a];
            let i = self.grid.axis_index(cell, a);
            *o = ax.lower + (T::of(i as f64) + T::unit_uniform(rng)) * ax.step();
        }
    }
}

/// Stream `n` samples through `visit(q, xi, p)` without materializing them.
pub fn for_each_sample<T: Real>(
    state: &EpistemicState<T>,
    model: &XiModel<T>,
    n: usize,
    mut visit: impl FnMut(&[T], T, &[T]),
) -> Result<()> {
    check_hbar(state, model)?;
    let law = state.momentum_law()?;
    let sampler = CellSampler::new(state.rho())?;
    let dims = state.grid().dims();
    let mut q = vec![T::zero(); dims];
    let mut p = vec![T::zero(); dims];
    let batches = n.div_ceil(BATCH);
    for b in 0..batches {
        let mut rng = substream(model.seed(), b as u64);
        let take = BATCH.min(n - b * BATCH);
        for _ in 0..take {
            let xi = draw_one(&sampler, &law, model, &mut rng, &mut q, &mut p)?;
            visit(&q, xi, &p);
        }
    }
    Ok(())
}

/// Draw `n` ontic samples; deterministic given the model seed.
pub fn draw_ensemble<T: Real>(
    state: &EpistemicState<T>,
    model: &XiModel<T>,
    n: usize,
) -> Result<Vec<OnticSample<T>>> {
    let mut out = Vec::with_capacity(n);
    for_each_sample(state, model, n, |q, xi, p| {
        out.push(OnticSample { q: q.to_vec(), xi, p: p.to_vec() });
    })?;
    Ok(out)
}

pub(crate) fn check_hbar<T: Real>(state: &EpistemicState<T>, model: &XiModel<T>) -> Result<()> {
    if (state.hbar() - model.hbar()).abs() > T::of(1e-12) * model.hbar() {
        return Err(SimError::Config(format!(
            "state hbar {} and xi-model hbar {} disagree",
            state.hbar().to64(),
            model.hbar().to64()
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn draw_one<T: Real, R: Rng + ?Sized>(
    sampler: &CellSampler<T>,
    law: &MomentumLaw<T>,
    model: &XiModel<T>,
    rng: &mut R,
    q: &mut [T],
    p: &mut [T],
) -> Result<T> {
    sampler.sample_into(rng, q);
    let xi = model.draw(rng);
    law.eval_into(q, xi, p)?;
    Ok(xi)
}
