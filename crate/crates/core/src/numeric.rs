//! Compensated summation.
//!
//! Quadratures and Monte Carlo reductions accumulate through [`Accum`]
//! (Neumaier's variant of Kahan summation) so results are reproducible to
//! ~1e-13 independently of how work is partitioned: parallel reductions
//! collect per-batch partials and merge them in batch order.

use crate::scalar::Real;
use num_complex::Complex;

/// Compensated scalar accumulator.
#[derive(Clone, Copy, Debug)]
pub struct Accum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for Accum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Accum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator (deterministic if call order is fixed).
    pub fn merge(&mut self, other: &Accum<T>) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (componentwise).
#[derive(Clone, Copy, Debug)]
pub struct CAccum<T> {
    re: Accum<T>,
    im: Accum<T>,
}

impl<T: Real> Default for CAccum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CAccum<T> {
    pub fn new() -> Self {
        Self { re: Accum::new(), im: Accum::new() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator.
pub fn csum<T: Real>(it: impl IntoIterator<Item = T>) -> T {
    let mut acc = Accum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}
