//! Discrete configuration-space grids, fields, finite-difference calculus,
//! and quadrature — the numeric substrate every other module builds on.
//!
//! Design choices of this module:
//!
//! * uniform rectangular grids with cell-centered samples;
//! * 2nd-order central differences as the default, one-sided rows at
//!   vanishing edges (4th-order variants available where engines need them);
//! * midpoint quadrature, matching both the storage layout and the default
//!   stencil order.

mod complex_field;
mod grid;
mod interp;
pub mod io;
mod scalar_field;
mod stencil;

pub use complex_field::ComplexField;
pub use grid::{Axis, Boundary, Grid};
pub use scalar_field::ScalarField;
pub use stencil::{fd_weights, DiffOrder};

#[cfg(test)]
mod tests;
