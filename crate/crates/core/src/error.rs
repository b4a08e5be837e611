//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in the simulation kernels.
///
/// Numeric payloads are widened to `f64` so the enum stays non-generic.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("axis {axis} out of range for a {dims}-dimensional grid")]
    AxisOutOfRange { axis: usize, dims: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("point left the grid domain on axis {axis}")]
    OutOfDomain { axis: usize },

    #[error(
        "momentum law undefined at {count} node point(s): density below threshold \
         with a non-vanishing gradient (min rho {rho_min:e})"
    )]
    Node { count: usize, rho_min: f64 },

    #[error("density is not normalizable on this grid")]
    NonNormalizable,

    #[error("eigenbasis does not span the state: residual {residual:e} > {tolerance:e}")]
    Span { residual: f64, tolerance: f64 },

    #[error("pointer packets overlap (max overlap {overlap:e}); outcome registration ambiguous")]
    Overlap { overlap: f64 },

    #[error("caustic: characteristics crossed near t = {t}")]
    Caustic { t: f64 },

    #[error("time step {dt:e} violates the stability bound {bound:e}")]
    Cfl { dt: f64, bound: f64 },

    #[error("integration unstable at step {step}: norm drift {drift:e}")]
    Unstable { step: usize, drift: f64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
