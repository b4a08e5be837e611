//! Finite-difference stencils.
//!
//! Weights come from Fornberg's recurrence, so centered and one-sided rows of
//! any order share one code path. The default stencils are 2nd order
//! (`DiffOrder::Two`); the expectation engines request 4th order where tight
//! quadrature tolerances demand it.

use num_complex::Complex;

use crate::error::{Result, SimError};
use crate::fields::grid::{Boundary, Grid};
use crate::scalar::Real;

/// Formal accuracy order of a derivative stencil.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DiffOrder {
    Two,
    Four,
}

impl DiffOrder {
    fn order(self) -> usize {
        match self {
            DiffOrder::Two => 2,
            DiffOrder::Four => 4,
        }
    }
}

/// Fornberg weights for the `m`-th derivative at `z` from nodes `x`.
pub fn fd_weights<T: Real>(z: T, x: &[T], m: usize) -> Vec<T> {
    let n = x.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![T::zero(); m + 1]; n];
    let mut c1 = T::one();
    let mut c4 = x[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (T::of(k as f64) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - T::of(k as f64) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Values that the stencil engine can combine linearly with real weights.
pub trait Lin<T: Real>: Copy + Send + Sync {
    fn lin_zero() -> Self;
    fn lin_axpy(self, w: T, v: Self) -> Self;
    fn lin_sub(self, o: Self) -> Self;
}

impl<T: Real> Lin<T> for T {
    #[inline]
    fn lin_zero() -> Self {
        T::zero()
    }
    #[inline]
    fn lin_axpy(self, w: T, v: Self) -> Self {
        self + w * v
    }
    #[inline]
    fn lin_sub(self, o: Self) -> Self {
        self - o
    }
}

impl<T: Real> Lin<T> for Complex<T> {
    #[inline]
    fn lin_zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    #[inline]
    fn lin_axpy(self, w: T, v: Self) -> Self {
        Complex::new(self.re + w * v.re, self.im + w * v.im)
    }
    #[inline]
    fn lin_sub(self, o: Self) -> Self {
        self - o
    }
}

/// One stencil row: node offsets relative to the evaluation index + weights.
struct Row<T> {
    offsets: Vec<isize>,
    weights: Vec<T>,
}

fn centered_row<T: Real>(h: T, m: usize, order: DiffOrder) -> Row<T> {
    let r = order.order() / 2;
    let offsets: Vec<isize> = (-(r as isize)..=r as isize).collect();
    let nodes: Vec<T> = offsets.iter().map(|&o| T::of(o as f64) * h).collect();
    let weights = fd_weights(T::zero(), &nodes, m);
    Row { offsets, weights }
}

/// One-sided/biased row evaluating the derivative at index `i` of an axis of
/// length `n`, using a window of `w` nodes clamped into `[0, n)`.
fn edge_row<T: Real>(h: T, m: usize, order: DiffOrder, i: usize, n: usize) -> Row<T> {
    let w = order.order() + m;
    let start = (i as isize - (w as isize - 1) / 2).clamp(0, n as isize - w as isize);
    let offsets: Vec<isize> = (0..w as isize).map(|k| start + k - i as isize).collect();
    let nodes: Vec<T> = offsets.iter().map(|&o| T::of(o as f64) * h).collect();
    let weights = fd_weights(T::zero(), &nodes, m);
    Row { offsets, weights }
}

/// Apply the `m`-th derivative along `axis` to row-major `values`.
pub fn axis_derivative<T: Real, V: Lin<T>>(
    values: &[V],
    grid: &Grid<T>,
    axis: usize,
    m: usize,
    order: DiffOrder,
) -> Result<Vec<V>> {
    let ax = grid.axis(axis)?;
    let n = ax.points;
    let h = ax.step();
    let stride = grid.stride(axis);
    let r = order.order() / 2;
    let needed = match ax.boundary {
        Boundary::Periodic => 2 * r + 1,
        Boundary::Vanishing => order.order() + m,
    };
    if n < needed {
        return Err(SimError::InvalidGrid(format!(
            "axis {axis} has {n} points; the requested stencil needs {needed}"
        )));
    }

    let center = centered_row::<T>(h, m, order);
    // Pre-built rows for the first/last r indices of a vanishing axis.
    let edges: Vec<Row<T>> = match ax.boundary {
        Boundary::Vanishing => (0..r)
            .flat_map(|i| [edge_row::<T>(h, m, order, i, n), edge_row::<T>(h, m, order, n - 1 - i, n)])
            .collect(),
        Boundary::Periodic => Vec::new(),
    };

    // Weights of a derivative stencil sum to zero, so the row is applied to
    // differences from the center value: constants map to exactly zero.
    let mut out = vec![V::lin_zero(); values.len()];
    match ax.boundary {
        Boundary::Periodic => {
            for (p, o) in out.iter_mut().enumerate() {
                let i = grid.axis_index(p, axis);
                let base = p - i * stride;
                let fc = values[p];
                let mut acc = V::lin_zero();
                for (off, wgt) in center.offsets.iter().zip(&center.weights) {
                    let j = (i as isize + off).rem_euclid(n as isize) as usize;
                    acc = acc.lin_axpy(*wgt, values[base + j * stride].lin_sub(fc));
                }
                *o = acc;
            }
        }
        Boundary::Vanishing => {
            for (p, o) in out.iter_mut().enumerate() {
                let i = grid.axis_index(p, axis);
                let row = if i < r {
                    &edges[2 * i]
                } else if i >= n - r {
                    &edges[2 * (n - 1 - i) + 1]
                } else {
                    &center
                };
                let base = p - i * stride;
                let fc = values[p];
                let mut acc = V::lin_zero();
                for (off, wgt) in row.offsets.iter().zip(&row.weights) {
                    let j = (i as isize + off) as usize;
                    acc = acc.lin_axpy(*wgt, values[base + j * stride].lin_sub(fc));
                }
                *o = acc;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_reproduces_known_rows() {
        // Central first derivative, 2nd order: (-1/2, 0, 1/2)/h.
        let w = fd_weights(0.0f64, &[-1.0, 0.0, 1.0], 1);
        assert!((w[0] + 0.5).abs() < 1e-14);
        assert!(w[1].abs() < 1e-14);
        assert!((w[2] - 0.5).abs() < 1e-14);

        // Central first derivative, 4th order: (1/12, -2/3, 0, 2/3, -1/12)/h.
        let w = fd_weights(0.0f64, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }

        // Forward first derivative, 2nd order: (-3/2, 2, -1/2)/h.
        let w = fd_weights(0.0f64, &[0.0, 1.0, 2.0], 1);
        let expect = [-1.5, 2.0, -0.5];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }

        // Central second derivative, 2nd order: (1, -2, 1)/h².
        let w = fd_weights(0.0f64, &[-1.0, 0.0, 1.0], 2);
        let expect = [1.0, -2.0, 1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }

        // Forward second derivative, 2nd order: (2, -5, 4, -1)/h².
        let w = fd_weights(0.0f64, &[0.0, 1.0, 2.0, 3.0], 2);
        let expect = [2.0, -5.0, 4.0, -1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_scale_with_step() {
        let w1 = fd_weights(0.0f64, &[-0.5, 0.0, 0.5], 1);
        let w2 = fd_weights(0.0f64, &[-1.0, 0.0, 1.0], 1);
        for (a, b) in w1.iter().zip(&w2) {
            assert!((a - 2.0 * b).abs() < 1e-14);
        }
    }
}
