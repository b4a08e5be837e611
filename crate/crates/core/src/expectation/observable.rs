//! Quadratic observables.
//!
//! A physical quantity at most second order in momentum:
//!
//! ```text
//! O(p, q) = ½ Σᵢⱼ gⁱʲ(q)(pᵢ − Aᵢ(q))(pⱼ − Aⱼ(q)) + Σᵢ bᵢ(q)·pᵢ + V(q)
//! ```
//!
//! with a symmetric metric gⁱʲ. The representation itself caps the momentum
//! order at two — nothing cubic is expressible. The explicit linear term bᵢ
//! covers quantities like a bare momentum component or the angular momentum
//! x·p_y − y·p_x, whose singular metric cannot be folded into the gauge form;
//! its quantization uses the symmetric ordering ½(bᵢ·p̂ᵢ + p̂ᵢ·bᵢ).

use crate::error::{Result, SimError};
use crate::fields::{Grid, ScalarField};
use crate::scalar::Real;

/// A coefficient that is either spatially constant or a field on a grid.
#[derive(Clone, Debug)]
pub enum Coeff<T> {
    Const(T),
    Field(ScalarField<T>),
}

impl<T: Real> Coeff<T> {
    pub fn zero() -> Self {
        Coeff::Const(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Const(c) if c.is_zero())
    }

    /// Value at grid point `idx` (fields must live on `grid`).
    #[inline]
    pub fn at(&self, idx: usize) -> T {
        match self {
            Coeff::Const(c) => *c,
            Coeff::Field(f) => f.values()[idx],
        }
    }

    /// Value at an arbitrary point (multilinear for fields).
    pub fn eval(&self, q: &[T]) -> Result<T> {
        match self {
            Coeff::Const(c) => Ok(*c),
            Coeff::Field(f) => f.interpolate(q),
        }
    }

    fn check_grid(&self, grid: &Grid<T>) -> Result<()> {
        if let Coeff::Field(f) = self {
            if f.grid() != grid {
                return Err(SimError::GridMismatch(
                    "observable coefficient lives on a different grid".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A classical quantity `O(p, q)` up to second order in momentum.
#[derive(Clone, Debug)]
pub struct QuadraticObservable<T> {
    label: String,
    dims: usize,
    metric: Vec<Coeff<T>>,
    gauge: Vec<Coeff<T>>,
    linear: Vec<Coeff<T>>,
    potential: Coeff<T>,
}

impl<T: Real> QuadraticObservable<T> {
    pub fn builder(dims: usize) -> ObservableBuilder<T> {
        ObservableBuilder {
            label: String::new(),
            dims,
            metric: vec![Coeff::zero(); dims * dims],
            gauge: vec![Coeff::zero(); dims],
            linear: vec![Coeff::zero(); dims],
            potential: Coeff::zero(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn metric(&self, i: usize, j: usize) -> &Coeff<T> {
        &self.metric[i * self.dims + j]
    }

    pub fn gauge(&self, i: usize) -> &Coeff<T> {
        &self.gauge[i]
    }

    pub fn linear(&self, i: usize) -> &Coeff<T> {
        &self.linear[i]
    }

    pub fn potential(&self) -> &Coeff<T> {
        &self.potential
    }

    /// True if any coefficient field disagrees with `grid`.
    pub fn check_grid(&self, grid: &Grid<T>) -> Result<()> {
        for c in self.metric.iter().chain(&self.gauge).chain(&self.linear) {
            c.check_grid(grid)?;
        }
        self.potential.check_grid(grid)
    }

    /// Evaluate `O(p, q)` at one phase-space point.
    pub fn evaluate(&self, q: &[T], p: &[T]) -> Result<T> {
        if q.len() != self.dims || p.len() != self.dims {
            return Err(SimError::Config(format!(
                "observable '{}' expects {} degrees of freedom",
                self.label, self.dims
            )));
        }
        let half = T::of(0.5);
        let mut total = self.potential.eval(q)?;
        for i in 0..self.dims {
            let bi = &self.linear[i];
            if !bi.is_zero() {
                total += bi.eval(q)? * p[i];
            }
            for j in 0..self.dims {
                let gij = &self.metric[i * self.dims + j];
                if gij.is_zero() {
                    continue;
                }
                let vi = p[i] - self.gauge[i].eval(q)?;
                let vj = p[j] - self.gauge[j].eval(q)?;
                total += half * gij.eval(q)? * vi * vj;
            }
        }
        Ok(total)
    }

    // --- named families -----------------------------------------------------

    /// O = q_axis.
    pub fn position(grid: &Grid<T>, axis: usize) -> Result<Self> {
        let _ = grid.axis(axis)?;
        Self::builder(grid.dims())
            .potential(Coeff::Field(ScalarField::from_fn(grid.clone(), |x| x[axis])))
            .label("position")
            .build()
    }

    /// O = p_axis.
    pub fn momentum(dims: usize, axis: usize) -> Result<Self> {
        Self::builder(dims)
            .linear(axis, Coeff::Const(T::one()))?
            .label("momentum")
            .build()
    }

    /// O = p_axis² (metric 2 on the diagonal, halved by the quadratic form).
    pub fn momentum_squared(dims: usize, axis: usize) -> Result<Self> {
        Self::builder(dims)
            .metric(axis, axis, Coeff::Const(T::of(2.0)))?
            .label("momentum_squared")
            .build()
    }

    /// O = (p_axis − center)².
    pub fn momentum_deviation_squared(dims: usize, axis: usize, center: T) -> Result<Self> {
        Self::builder(dims)
            .metric(axis, axis, Coeff::Const(T::of(2.0)))?
            .gauge(axis, Coeff::Const(center))?
            .label("momentum_deviation_squared")
            .build()
    }

    /// O = Σᵢ pᵢ²/2mᵢ.
    pub fn kinetic(masses: &[T]) -> Result<Self> {
        let mut b = Self::builder(masses.len());
        for (i, &m) in masses.iter().enumerate() {
            if m <= T::zero() {
                return Err(SimError::Config("masses must be positive".into()));
            }
            b = b.metric(i, i, Coeff::Const(m.recip()))?;
        }
        b.label("kinetic").build()
    }

    /// O = p²/2m + ½ mω² (q − center)² on a one-dimensional grid.
    pub fn harmonic(grid: &Grid<T>, mass: T, omega: T, center: T) -> Result<Self> {
        if grid.dims() != 1 {
            return Err(SimError::Config("harmonic observable expects one dimension".into()));
        }
        let half_k = T::of(0.5) * mass * omega * omega;
        Self::builder(1)
            .metric(0, 0, Coeff::Const(mass.recip()))?
            .potential(Coeff::Field(ScalarField::from_fn(grid.clone(), |x| {
                let d = x[0] - center;
                half_k * d * d
            })))
            .label("harmonic")
            .build()
    }

    /// O = x·p_y − y·p_x on a two-dimensional grid (axes 0 = x, 1 = y).
    pub fn angular_momentum_z(grid: &Grid<T>) -> Result<Self> {
        if grid.dims() != 2 {
            return Err(SimError::Config(
                "angular_momentum_z expects a two-dimensional grid".into(),
            ));
        }
        Self::builder(2)
            .linear(0, Coeff::Field(ScalarField::from_fn(grid.clone(), |x| -x[1])))?
            .linear(1, Coeff::Field(ScalarField::from_fn(grid.clone(), |x| x[0])))?
            .label("angular_momentum_z")
            .build()
    }

    /// O = pᵢ·pⱼ for i ≠ j (cross metric; the operators commute).
    pub fn momentum_product(dims: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Self::momentum_squared(dims, i);
        }
        Self::builder(dims)
            .metric(i, j, Coeff::Const(T::one()))?
            .label("momentum_product")
            .build()
    }
}

/// Builder enforcing the symmetric metric by mirroring assignments.
pub struct ObservableBuilder<T> {
    label: String,
    dims: usize,
    metric: Vec<Coeff<T>>,
    gauge: Vec<Coeff<T>>,
    linear: Vec<Coeff<T>>,
    potential: Coeff<T>,
}

impl<T: Real> ObservableBuilder<T> {
    pub fn label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn metric(mut self, i: usize, j: usize, c: Coeff<T>) -> Result<Self> {
        self.check_axis(i)?;
        self.check_axis(j)?;
        self.metric[i * self.dims + j] = c.clone();
        self.metric[j * self.dims + i] = c;
        Ok(self)
    }

    pub fn gauge(mut self, i: usize, c: Coeff<T>) -> Result<Self> {
        self.check_axis(i)?;
        self.gauge[i] = c;
        Ok(self)
    }

    pub fn linear(mut self, i: usize, c: Coeff<T>) -> Result<Self> {
        self.check_axis(i)?;
        self.linear[i] = c;
        Ok(self)
    }

    pub fn potential(mut self, c: Coeff<T>) -> Self {
        self.potential = c;
        self
    }

    fn check_axis(&self, i: usize) -> Result<()> {
        if i >= self.dims {
            return Err(SimError::AxisOutOfRange { axis: i, dims: self.dims });
        }
        Ok(())
    }

    pub fn build(self) -> Result<QuadraticObservable<T>> {
        if self.dims == 0 {
            return Err(SimError::Config("observable needs at least one degree of freedom".into()));
        }
        Ok(QuadraticObservable {
            label: if self.label.is_empty() { "custom".into() } else { self.label },
            dims: self.dims,
            metric: self.metric,
            gauge: self.gauge,
            linear: self.linear,
            potential: self.potential,
        })
    }
}
