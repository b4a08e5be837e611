//! Multilinear interpolation between cell centers.
//!
//! Periodic axes wrap across the seam. On vanishing axes the value is clamped
//! within the outer half-cells (the nearest stored sample), and points outside
//! the closed domain are an error.

use crate::error::{Result, SimError};
use crate::fields::grid::{Boundary, Grid};
use crate::fields::stencil::Lin;
use crate::scalar::Real;

struct AxisLocation {
    i0: usize,
    i1: usize,
    frac: f64,
}

fn locate<T: Real>(grid: &Grid<T>, axis: usize, x: T) -> Result<AxisLocation> {
    let ax = &grid.axes()[axis];
    let n = ax.points;
    let h = ax.step();
    match ax.boundary {
        Boundary::Periodic => {
            let span = ax.extent();
            // Wrap into [lower, upper), then measure from the first center.
            let mut rel = (x - ax.lower) / span;
            rel = rel - rel.floor();
            let u = rel.to64() * n as f64 - 0.5;
            let base = u.floor();
            let frac = u - base;
            let i0 = (base.rem_euclid(n as f64)) as usize % n;
            let i1 = (i0 + 1) % n;
            Ok(AxisLocation { i0, i1, frac })
        }
        Boundary::Vanishing => {
            if x < ax.lower || x > ax.upper {
                return Err(SimError::OutOfDomain { axis });
            }
            let u = ((x - ax.lower) / h).to64() - 0.5;
            let base = u.floor();
            let mut frac = u - base;
            let mut i0 = base as isize;
            if i0 < 0 {
                i0 = 0;
                frac = 0.0;
            }
            if i0 as usize >= n - 1 {
                i0 = n as isize - 2;
                frac = 1.0;
            }
            Ok(AxisLocation { i0: i0 as usize, i1: i0 as usize + 1, frac })
        }
    }
}

/// Interpolate row-major `values` at point `x`.
pub fn interpolate_values<T: Real, V: Lin<T>>(grid: &Grid<T>, values: &[V], x: &[T]) -> Result<V> {
    let dims = grid.dims();
    assert_eq!(x.len(), dims, "point dimensionality must match the grid");
    let mut locs = Vec::with_capacity(dims);
    for a in 0..dims {
        locs.push(locate(grid, a, x[a])?);
    }
    let mut acc = V::lin_zero();
    // 2^N corner loop (N is small: grids are at most a few dimensions).
    for corner in 0..(1usize << dims) {
        let mut w = 1.0f64;
        let mut flat = 0usize;
        for (a, loc) in locs.iter().enumerate() {
            let hi = (corner >> a) & 1 == 1;
            w *= if hi { loc.frac } else { 1.0 - loc.frac };
            flat += grid.stride(a) * if hi { loc.i1 } else { loc.i0 };
        }
        if w != 0.0 {
            acc = acc.lin_axpy(T::of(w), values[flat]);
        }
    }
    Ok(acc)
}
