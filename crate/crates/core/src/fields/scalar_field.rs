//! Real scalar fields on a grid, with finite-difference calculus and
//! midpoint quadrature.

use crate::error::{Result, SimError};
use crate::fields::grid::Grid;
use crate::fields::interp::interpolate_values;
use crate::fields::stencil::{axis_derivative, DiffOrder};
use crate::numeric::Accum;
use crate::scalar::Real;

/// A real number per grid point. Immutable once constructed; all operations
/// return new fields and are safe to evaluate concurrently.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    /// Wrap values (row-major) on a grid; counts and finiteness are checked.
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SimError::InvalidField(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(SimError::InvalidField("non-finite value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![T::zero(); n] }
    }

    pub fn constant(grid: Grid<T>, v: T) -> Self {
        let n = grid.len();
        Self { grid, values: vec![v; n] }
    }

    /// Evaluate `f` at every cell center.
    pub fn from_fn(grid: Grid<T>, mut f: impl FnMut(&[T]) -> T) -> Self {
        let mut point = vec![T::zero(); grid.dims()];
        let values = (0..grid.len())
            .map(|p| {
                grid.point_into(p, &mut point);
                f(&point)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub(crate) fn from_raw(grid: Grid<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(SimError::GridMismatch("scalar fields live on different grids".into()));
        }
        Ok(())
    }

    /// First derivative along `axis`, 2nd-order stencils.
    pub fn gradient(&self, axis: usize) -> Result<Self> {
        self.derivative(axis, 1, DiffOrder::Two)
    }

    /// First derivative along `axis`, 4th-order stencils.
    pub fn gradient_o4(&self, axis: usize) -> Result<Self> {
        self.derivative(axis, 1, DiffOrder::Four)
    }

    /// `m`-th derivative along `axis` at the requested stencil order.
    pub fn derivative(&self, axis: usize, m: usize, order: DiffOrder) -> Result<Self> {
        let values = axis_derivative(&self.values, &self.grid, axis, m, order)?;
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Mixed second derivative `∂_i ∂_j`, symmetric in `(i, j)`.
    pub fn laplacian_like(&self, i: usize, j: usize) -> Result<Self> {
        self.laplacian_like_order(i, j, DiffOrder::Two)
    }

    pub fn laplacian_like_order(&self, i: usize, j: usize, order: DiffOrder) -> Result<Self> {
        if i == j {
            self.derivative(i, 2, order)
        } else {
            // Stencils along distinct axes commute, so this is symmetric.
            self.derivative(j, 1, order)?.derivative(i, 1, order)
        }
    }

    /// Midpoint quadrature `Σ f · dV` (compensated).
    pub fn integrate(&self) -> T {
        let dv = self.grid.cell_volume();
        let mut acc = Accum::new();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value() * dv
    }

    /// Quadrature of `f·g` without materializing the product.
    pub fn integrate_with(&self, other: &Self) -> Result<T> {
        self.check_same_grid(other)?;
        let dv = self.grid.cell_volume();
        let mut acc = Accum::new();
        for (&a, &b) in self.values.iter().zip(&other.values) {
            acc.add(a * b);
        }
        Ok(acc.value() * dv)
    }

    /// Multilinear interpolation at `x`.
    pub fn interpolate(&self, x: &[T]) -> Result<T> {
        interpolate_values(&self.grid, &self.values, x)
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Maximum absolute value.
    pub fn amax(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }
}
