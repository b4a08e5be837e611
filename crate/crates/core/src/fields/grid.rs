//! Uniform rectangular grids over N-dimensional configuration space.
//!
//! Grid points sit at cell centers: `q_i = lower + (i + 1/2)·dq`. Midpoint
//! quadrature is then exactly `Σ f·dq`, and the same sample layout serves the
//! finite-difference stencils and the spectral kinetic propagator.

use crate::error::{Result, SimError};
use crate::scalar::Real;

/// Behaviour of fields at an axis boundary.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// The axis wraps: stencils and interpolation reach across the seam.
    Periodic,
    /// Fields are treated as zero outside the domain; stencils fall back to
    /// one-sided rows at the edges.
    Vanishing,
}

/// One axis of configuration space.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis<T> {
    pub lower: T,
    pub upper: T,
    pub points: usize,
    pub boundary: Boundary,
}

impl<T: Real> Axis<T> {
    pub fn new(lower: T, upper: T, points: usize, boundary: Boundary) -> Self {
        Self { lower, upper, points, boundary }
    }

    /// Cell size `dq`.
    pub fn step(&self) -> T {
        (self.upper - self.lower) / T::of(self.points as f64)
    }

    /// Domain length `upper − lower`.
    pub fn extent(&self) -> T {
        self.upper - self.lower
    }

    /// Coordinate of cell center `i`.
    pub fn coord(&self, i: usize) -> T {
        self.lower + (T::of(i as f64) + T::of(0.5)) * self.step()
    }
}

/// Uniform rectangular discretization of ℝᴺ with a per-axis boundary policy.
///
/// Values attached to a grid are stored row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    axes: Vec<Axis<T>>,
    strides: Vec<usize>,
    len: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(axes: Vec<Axis<T>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(SimError::InvalidGrid("a grid needs at least one axis".into()));
        }
        for (a, ax) in axes.iter().enumerate() {
            if ax.points < 4 {
                return Err(SimError::InvalidGrid(format!(
                    "axis {a} has {} points; at least 4 required",
                    ax.points
                )));
            }
            if !(ax.lower.is_finite() && ax.upper.is_finite()) || ax.upper <= ax.lower {
                return Err(SimError::InvalidGrid(format!(
                    "axis {a} has an empty or non-finite extent"
                )));
            }
        }
        let mut strides = vec![1usize; axes.len()];
        for a in (0..axes.len().saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * axes[a + 1].points;
        }
        let len = axes.iter().map(|ax| ax.points).product();
        Ok(Self { axes, strides, len })
    }

    /// Convenience constructor for a one-dimensional grid.
    pub fn line(lower: T, upper: T, points: usize, boundary: Boundary) -> Result<Self> {
        Self::new(vec![Axis::new(lower, upper, points, boundary)])
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn axes(&self) -> &[Axis<T>] {
        &self.axes
    }

    pub fn axis(&self, a: usize) -> Result<&Axis<T>> {
        self.axes.get(a).ok_or(SimError::AxisOutOfRange { axis: a, dims: self.dims() })
    }

    pub fn step(&self, a: usize) -> T {
        self.axes[a].step()
    }

    pub fn stride(&self, a: usize) -> usize {
        self.strides[a]
    }

    /// Volume of one cell, `∏ dq_a`.
    pub fn cell_volume(&self) -> T {
        self.axes.iter().fold(T::one(), |v, ax| v * ax.step())
    }

    /// Index along `a` of the flat index `p`.
    #[inline]
    pub fn axis_index(&self, p: usize, a: usize) -> usize {
        (p / self.strides[a]) % self.axes[a].points
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Coordinates of the flat index `p`, written into `out`.
    #[inline]
    pub fn point_into(&self, p: usize, out: &mut [T]) {
        for (a, o) in out.iter_mut().enumerate() {
            *o = self.axes[a].coord(self.axis_index(p, a));
        }
    }

    /// Coordinates of the flat index `p`.
    pub fn point(&self, p: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.dims()];
        self.point_into(p, &mut out);
        out
    }

    /// True if every axis is periodic.
    pub fn all_periodic(&self) -> bool {
        self.axes.iter().all(|ax| ax.boundary == Boundary::Periodic)
    }

    /// Whether `x` lies inside the closed domain box.
    pub fn contains(&self, x: &[T]) -> bool {
        x.iter()
            .zip(&self.axes)
            .all(|(xi, ax)| *xi >= ax.lower && *xi <= ax.upper)
    }

    /// Human-readable one-line description (used in reports).
    pub fn describe(&self) -> String {
        self.axes
            .iter()
            .map(|ax| {
                format!(
                    "[{}, {}] n={} {}",
                    ax.lower,
                    ax.upper,
                    ax.points,
                    match ax.boundary {
                        Boundary::Periodic => "periodic",
                        Boundary::Vanishing => "vanishing",
                    }
                )
            })
            .collect::<Vec<_>>()
            .join(" x ")
    }
}
