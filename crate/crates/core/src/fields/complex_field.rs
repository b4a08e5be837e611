//! Complex scalar fields (wavefunctions) on a grid.

use num_complex::Complex;

use crate::error::{Result, SimError};
use crate::fields::grid::Grid;
use crate::fields::interp::interpolate_values;
use crate::fields::scalar_field::ScalarField;
use crate::fields::stencil::{axis_derivative, DiffOrder};
use crate::numeric::{Accum, CAccum};
use crate::scalar::Real;

/// A complex number per grid point; houses ψ(q).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField<T> {
    grid: Grid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> ComplexField<T> {
    pub fn new(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SimError::InvalidField(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(SimError::InvalidField("non-finite value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid<T>, mut f: impl FnMut(&[T]) -> Complex<T>) -> Self {
        let mut point = vec![T::zero(); grid.dims()];
        let values = (0..grid.len())
            .map(|p| {
                grid.point_into(p, &mut point);
                f(&point)
            })
            .collect();
        Self { grid, values }
    }

    /// Assemble from real and imaginary parts.
    pub fn from_parts(re: &ScalarField<T>, im: &ScalarField<T>) -> Result<Self> {
        re.check_same_grid(im)?;
        let values = re
            .values()
            .iter()
            .zip(im.values())
            .map(|(&a, &b)| Complex::new(a, b))
            .collect();
        Ok(Self { grid: re.grid().clone(), values })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub(crate) fn from_raw(grid: Grid<T>, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(SimError::GridMismatch("complex fields live on different grids".into()));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// |ψ|² as a scalar field.
    pub fn modulus_squared(&self) -> ScalarField<T> {
        let values = self.values.iter().map(|v| v.norm_sqr()).collect();
        ScalarField::from_raw(self.grid.clone(), values)
    }

    /// `∫ |ψ|² dV`.
    pub fn norm_sq(&self) -> T {
        let dv = self.grid.cell_volume();
        let mut acc = Accum::new();
        for v in &self.values {
            acc.add(v.norm_sqr());
        }
        acc.value() * dv
    }

    /// Rescaled copy with `∫|ψ|² = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n.is_finite() && n > T::zero()) {
            return Err(SimError::NonNormalizable);
        }
        let s = n.sqrt().recip();
        Ok(self.map(|v| v * s))
    }

    /// Inner product `∫ conj(self)·other dV`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_grid(other)?;
        let dv = self.grid.cell_volume();
        let mut acc = CAccum::new();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc.add(a.conj() * b);
        }
        Ok(acc.value() * dv)
    }

    /// Complex quadrature `∫ ψ dV`.
    pub fn integrate(&self) -> Complex<T> {
        let dv = self.grid.cell_volume();
        let mut acc = CAccum::new();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value() * dv
    }

    pub fn gradient(&self, axis: usize) -> Result<Self> {
        self.derivative(axis, 1, DiffOrder::Two)
    }

    pub fn gradient_o4(&self, axis: usize) -> Result<Self> {
        self.derivative(axis, 1, DiffOrder::Four)
    }

    pub fn derivative(&self, axis: usize, m: usize, order: DiffOrder) -> Result<Self> {
        let values = axis_derivative(&self.values, &self.grid, axis, m, order)?;
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn interpolate(&self, x: &[T]) -> Result<Complex<T>> {
        interpolate_values(&self.grid, &self.values, x)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// L² distance `√∫|a − b|² dV`.
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        self.check_same_grid(other)?;
        let dv = self.grid.cell_volume();
        let mut acc = Accum::new();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc.add((a - b).norm_sqr());
        }
        Ok((acc.value() * dv).sqrt())
    }
}
