//! Epistemic states (ρ, S) and the restricted momentum law.
//!
//! The pair of a configuration density ρ and an action-valued phase S is the
//! whole epistemic state of the model. The `kind` flag records whether S plays
//! the classical principal function or the quantum phase; quantum states also
//! know ħ so they can be mapped to a wavefunction and so phase gradients can
//! wrap correctly across periodic seams.

use crate::error::{Result, SimError};
use crate::fields::{Boundary, DiffOrder, Grid, ScalarField};
use crate::scalar::Real;
use crate::{NODE_EPS_REL, NORM_TOL};

/// Which role the phase field plays.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StateKind {
    Classical,
    Quantum,
}

/// The model's epistemic state: a probability density over configurations and
/// a phase with units of action. Immutable once constructed.
#[derive(Clone, Debug)]
pub struct EpistemicState<T> {
    rho: ScalarField<T>,
    phase: ScalarField<T>,
    kind: StateKind,
    hbar: T,
}

impl<T: Real> EpistemicState<T> {
    /// Build a state, enforcing ρ ≥ 0 and `∫ρ = 1` within [`NORM_TOL`].
    pub fn new(rho: ScalarField<T>, phase: ScalarField<T>, kind: StateKind, hbar: T) -> Result<Self> {
        rho.check_same_grid(&phase)?;
        if !(hbar.is_finite() && hbar > T::zero()) {
            return Err(SimError::Config("hbar must be positive and finite".into()));
        }
        if rho.values().iter().any(|&v| v < T::zero()) {
            return Err(SimError::InvalidField("density has negative values".into()));
        }
        let norm = rho.integrate();
        if (norm - T::one()).abs() > T::of(NORM_TOL) {
            return Err(SimError::InvalidField(format!(
                "density integrates to {} (must be 1 within {NORM_TOL:e})",
                norm.to64()
            )));
        }
        Ok(Self { rho, phase, kind, hbar })
    }

    /// Normalize ρ first, then build the state.
    pub fn from_unnormalized(
        rho: ScalarField<T>,
        phase: ScalarField<T>,
        kind: StateKind,
        hbar: T,
    ) -> Result<Self> {
        let norm = rho.integrate();
        if !(norm.is_finite() && norm > T::zero()) {
            return Err(SimError::NonNormalizable);
        }
        Self::new(rho.scale(norm.recip()), phase, kind, hbar)
    }

    /// Solver-internal constructor: finiteness only, normalization drift is
    /// the caller's diagnostic.
    pub(crate) fn new_unchecked(
        rho: ScalarField<T>,
        phase: ScalarField<T>,
        kind: StateKind,
        hbar: T,
    ) -> Self {
        Self { rho, phase, kind, hbar }
    }

    pub fn grid(&self) -> &Grid<T> {
        self.rho.grid()
    }

    pub fn rho(&self) -> &ScalarField<T> {
        &self.rho
    }

    pub fn phase(&self) -> &ScalarField<T> {
        &self.phase
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// ⟨q_axis⟩ under ρ.
    pub fn mean_position(&self, axis: usize) -> Result<T> {
        let g = self.grid().clone();
        let _ = g.axis(axis)?;
        let q = ScalarField::from_fn(g, |x| x[axis]);
        self.rho.integrate_with(&q)
    }

    /// Var(q_axis) under ρ.
    pub fn position_variance(&self, axis: usize) -> Result<T> {
        let mean = self.mean_position(axis)?;
        let g = self.grid().clone();
        let dev = ScalarField::from_fn(g, |x| (x[axis] - mean) * (x[axis] - mean));
        self.rho.integrate_with(&dev)
    }

    /// ∂S along `axis`.
    ///
    /// For quantum states on a periodic axis the phase is only defined modulo
    /// 2πħ (plane waves wind), so the gradient is taken through
    /// `ħ·(cos·∂sin − sin·∂cos)` of θ = S/ħ, which is seam-safe. Everywhere
    /// else the stored values are differentiated directly.
    pub fn phase_gradient(&self, axis: usize, order: DiffOrder) -> Result<ScalarField<T>> {
        let ax = self.grid().axis(axis)?;
        if self.kind == StateKind::Quantum && ax.boundary == Boundary::Periodic {
            let inv_h = self.hbar.recip();
            let c = self.phase.map(|s| (s * inv_h).cos());
            let s = self.phase.map(|s| (s * inv_h).sin());
            let dc = c.derivative(axis, 1, order)?;
            let ds = s.derivative(axis, 1, order)?;
            let mut vals = Vec::with_capacity(c.values().len());
            for i in 0..c.values().len() {
                vals.push(self.hbar * (c.values()[i] * ds.values()[i] - s.values()[i] * dc.values()[i]));
            }
            Ok(ScalarField::new(self.grid().clone(), vals)?)
        } else {
            self.phase.derivative(axis, 1, order)
        }
    }

    /// ∂ρ/ρ along `axis`, with the node guard.
    ///
    /// Points where ρ falls below `NODE_EPS_REL · max ρ` are only tolerated if
    /// the density gradient is negligible there too (deep tails); a small ρ
    /// under a live gradient is a node, where the momentum law diverges.
    pub fn log_density_gradient(&self, axis: usize, order: DiffOrder) -> Result<ScalarField<T>> {
        let drho = self.rho.derivative(axis, 1, order)?;
        let rho_max = self.rho.max_value();
        let eps = T::of(NODE_EPS_REL) * rho_max;
        let slope_tol = T::of(1e-6) * drho.amax();
        let mut nodes = 0usize;
        let mut rho_min = T::infinity();
        let vals: Vec<T> = self
            .rho
            .values()
            .iter()
            .zip(drho.values())
            .map(|(&r, &d)| {
                if r <= eps {
                    rho_min = rho_min.min(r);
                    if d.abs() > slope_tol {
                        nodes += 1;
                    }
                    d / eps
                } else {
                    d / r
                }
            })
            .collect();
        if nodes > 0 {
            return Err(SimError::Node { count: nodes, rho_min: rho_min.to64() });
        }
        Ok(ScalarField::new(self.grid().clone(), vals)?)
    }

    /// Precompute the restricted momentum law `p_i(q; ξ) = ∂_i S + (ξ/2) ∂_i ρ/ρ`.
    pub fn momentum_law(&self) -> Result<MomentumLaw<T>> {
        self.momentum_law_with_order(DiffOrder::Two)
    }

    pub fn momentum_law_with_order(&self, order: DiffOrder) -> Result<MomentumLaw<T>> {
        let dims = self.grid().dims();
        let mut grad_s = Vec::with_capacity(dims);
        let mut dlog_rho = Vec::with_capacity(dims);
        for a in 0..dims {
            grad_s.push(self.phase_gradient(a, order)?);
            dlog_rho.push(self.log_density_gradient(a, order)?);
        }
        Ok(MomentumLaw { grad_s, dlog_rho })
    }

    /// The momentum field for one realization of ξ, one component per axis.
    pub fn momentum_field(&self, xi: T) -> Result<Vec<ScalarField<T>>> {
        Ok(self.momentum_law()?.field(xi))
    }
}

/// Cached pieces of the restricted momentum law for one state.
#[derive(Clone, Debug)]
pub struct MomentumLaw<T> {
    grad_s: Vec<ScalarField<T>>,
    dlog_rho: Vec<ScalarField<T>>,
}

impl<T: Real> MomentumLaw<T> {
    pub fn dims(&self) -> usize {
        self.grad_s.len()
    }

    pub fn grad_s(&self) -> &[ScalarField<T>] {
        &self.grad_s
    }

    pub fn dlog_rho(&self) -> &[ScalarField<T>] {
        &self.dlog_rho
    }

    /// Momentum components as grid fields for a fixed ξ.
    pub fn field(&self, xi: T) -> Vec<ScalarField<T>> {
        let half_xi = xi * T::of(0.5);
        self.grad_s
            .iter()
            .zip(&self.dlog_rho)
            .map(|(gs, dl)| {
                gs.zip_map(dl, |a, b| a + half_xi * b)
                    .expect("components share one grid")
            })
            .collect()
    }

    /// Momentum at an off-grid point (multilinear in the cached fields).
    pub fn eval_into(&self, q: &[T], xi: T, out: &mut [T]) -> Result<()> {
        let half_xi = xi * T::of(0.5);
        for a in 0..self.dims() {
            out[a] = self.grad_s[a].interpolate(q)? + half_xi * self.dlog_rho[a].interpolate(q)?;
        }
        Ok(())
    }
}

/// Solve for the unique density the epistemic restriction permits for a
/// ξ-proportional momentum field `p(q; ξ) = ξ·f(q)` with constant S.
///
/// ρ must then obey `∂ρ/ρ = 2f`, i.e. `ρ ∝ exp(2∫f)`; the antiderivative is
/// taken by the trapezoid rule along the (one-dimensional) grid.
pub fn solve_density_for_field<T: Real>(f: &ScalarField<T>, hbar: T) -> Result<EpistemicState<T>> {
    let grid = f.grid().clone();
    if grid.dims() != 1 {
        return Err(SimError::Config(
            "solve_density_for_field supports one-dimensional grids".into(),
        ));
    }
    let h = grid.step(0);
    let vals = f.values();
    let mut cum = Vec::with_capacity(vals.len());
    let mut acc = T::zero();
    cum.push(acc);
    for w in vals.windows(2) {
        acc += (w[0] + w[1]) * T::of(0.5) * h;
        cum.push(acc);
    }
    // Shift before exponentiating: any additive constant is absorbed by the
    // normalization, and the shift avoids overflow.
    let two = T::of(2.0);
    let top = cum.iter().fold(T::neg_infinity(), |m, &v| m.max(two * v));
    if !top.is_finite() {
        return Err(SimError::NonNormalizable);
    }
    let rho_vals: Vec<T> = cum.iter().map(|&v| (two * v - top).exp()).collect();
    let rho = ScalarField::new(grid.clone(), rho_vals)
        .map_err(|_| SimError::NonNormalizable)?;
    EpistemicState::from_unnormalized(rho, ScalarField::zeros(grid), StateKind::Quantum, hbar)
}
