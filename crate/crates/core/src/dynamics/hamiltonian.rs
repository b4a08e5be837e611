//! Hamiltonians of kinetic-plus-potential form.

use crate::error::{Result, SimError};
use crate::expectation::{Coeff, QuadraticObservable};
use crate::fields::{Grid, ScalarField};
use crate::scalar::Real;

/// `H(p, q) = Σᵢ (pᵢ − Aᵢ)²/2mᵢ + V(q)` — the quadratic observable with a
/// diagonal kinetic metric that generates every time evolution in this module.
///
/// The gauge components are spatially constant; the integrators do not support
/// vector-potential fields.
#[derive(Clone, Debug)]
pub struct Hamiltonian<T> {
    masses: Vec<T>,
    gauge: Vec<T>,
    potential: Coeff<T>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(masses: Vec<T>, gauge: Vec<T>, potential: Coeff<T>) -> Result<Self> {
        if masses.is_empty() {
            return Err(SimError::Config("a Hamiltonian needs at least one degree of freedom".into()));
        }
        if masses.iter().any(|&m| !(m.is_finite() && m > T::zero())) {
            return Err(SimError::Config("masses must be positive".into()));
        }
        if gauge.len() != masses.len() {
            return Err(SimError::Config("gauge components must match the degrees of freedom".into()));
        }
        Ok(Self { masses, gauge, potential })
    }

    /// Free particle(s) of equal mass.
    pub fn free(dims: usize, mass: T) -> Result<Self> {
        Self::new(vec![mass; dims], vec![T::zero(); dims], Coeff::zero())
    }

    /// One degree of freedom in a potential field.
    pub fn with_potential(mass: T, potential: Coeff<T>) -> Result<Self> {
        Self::new(vec![mass], vec![T::zero()], potential)
    }

    /// Harmonic well ½mω²(q − center)² on a one-dimensional grid.
    pub fn harmonic(grid: &Grid<T>, mass: T, omega: T, center: T) -> Result<Self> {
        if grid.dims() != 1 {
            return Err(SimError::Config("harmonic Hamiltonian expects one dimension".into()));
        }
        let half_k = T::of(0.5) * mass * omega * omega;
        let v = ScalarField::from_fn(grid.clone(), |q| {
            let d = q[0] - center;
            half_k * d * d
        });
        Self::with_potential(mass, Coeff::Field(v))
    }

    pub fn dims(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn gauge(&self) -> &[T] {
        &self.gauge
    }

    pub fn potential(&self) -> &Coeff<T> {
        &self.potential
    }

    /// The same Hamiltonian as a [`QuadraticObservable`] for the expectation
    /// engines.
    pub fn as_observable(&self) -> Result<QuadraticObservable<T>> {
        let mut b = QuadraticObservable::builder(self.dims());
        for (i, &m) in self.masses.iter().enumerate() {
            b = b
                .metric(i, i, Coeff::Const(m.recip()))?
                .gauge(i, Coeff::Const(self.gauge[i]))?;
        }
        b.potential(self.potential.clone()).label("hamiltonian").build()
    }

    /// H(p, q) at a phase-space point (potential interpolated).
    pub fn evaluate(&self, q: &[T], p: &[T]) -> Result<T> {
        let mut e = self.potential.eval(q)?;
        for a in 0..self.dims() {
            let v = p[a] - self.gauge[a];
            e += v * v / (T::of(2.0) * self.masses[a]);
        }
        Ok(e)
    }

    /// Default stable step for the diffusive finite-difference schemes:
    /// `0.1 · dq² · m / ħ` over the stiffest axis.
    pub fn default_fd_dt(&self, grid: &Grid<T>, hbar: T) -> T {
        let mut dt = T::infinity();
        for (a, &m) in self.masses.iter().enumerate() {
            let h = grid.step(a);
            dt = dt.min(T::of(0.1) * h * h * m / hbar);
        }
        dt
    }
}
