//! Ensemble simulator for classical statistical mechanics with an ontic
//! extension and an epistemic restriction.
//!
//! The model under study is ordinary Hamilton–Jacobi statistical mechanics of
//! trajectory ensembles, modified in two ways:
//!
//! * a **global random variable** ξ, spatially uniform, shared by every degree
//!   of freedom, with mean 0 and variance ħ²;
//! * a **restricted momentum law**: given a configuration density ρ and a phase
//!   S, the momentum conditioned on (q, ξ) is pinned to
//!   `p_i = ∂_i S + (ξ/2) ∂_i ρ / ρ` instead of being freely choosable.
//!
//! Averaging over ξ reproduces quantum expectation values, uncertainty
//! relations, Schrödinger dynamics, entanglement through interaction, and Born
//! measurement statistics, and this crate exists to verify all of that
//! numerically. The modules are:
//!
//! * [`fields`] — uniform grids, scalar/complex fields, finite differences,
//!   quadrature, and field (de)serialization;
//! * [`epistemic`] — epistemic states (ρ, S), the ξ distribution, the
//!   restricted momentum law, sampling, and the wavefunction map
//!   ψ = √ρ·exp(iS/ħ);
//! * [`expectation`] — quadratic observables and the three expectation
//!   engines (Monte Carlo, closed-form phase-space quadrature, quantum
//!   operator quadrature) plus uncertainty products;
//! * [`dynamics`] — Schrödinger, Madelung-form, and classical Hamilton–Jacobi
//!   time evolution with conservation diagnostics;
//! * [`measurement`] — the von Neumann pointer-measurement model, Born
//!   statistics, the angular-momentum scenario, and its classical
//!   counterfactual;
//! * [`correlation`] — two-particle momentum correlations contrasting shared
//!   (nonseparable) and independent (separable) ξ.
//!
//! All numeric kernels are generic over the scalar type through [`Real`];
//! concrete `f64` (and `f32`) aliases are exported at the crate root.

pub mod correlation;
pub mod dynamics;
pub mod epistemic;
pub mod error;
pub mod expectation;
pub mod fields;
pub mod measurement;
pub mod numeric;
pub mod rng;
pub mod scalar;

pub use error::{Result, SimError};
pub use scalar::Real;

/// 1e-8: tolerance on `∫ρ − 1` accepted by state constructors.
pub const NORM_TOL: f64 = 1e-8;
/// Relative density floor below which the momentum law refuses to divide.
pub const NODE_EPS_REL: f64 = 1e-12;

// Concrete f64 aliases (the working precision of every bundled scenario).
pub type Grid64 = fields::Grid<f64>;
pub type Axis64 = fields::Axis<f64>;
pub type Field64 = fields::ScalarField<f64>;
pub type CField64 = fields::ComplexField<f64>;
pub type State64 = epistemic::EpistemicState<f64>;
pub type XiModel64 = epistemic::XiModel<f64>;
pub type Observable64 = expectation::QuadraticObservable<f64>;
pub type Hamiltonian64 = dynamics::Hamiltonian<f64>;

// f32 aliases, for callers that trade accuracy for footprint.
pub type Grid32 = fields::Grid<f32>;
pub type Field32 = fields::ScalarField<f32>;
pub type CField32 = fields::ComplexField<f32>;
pub type State32 = epistemic::EpistemicState<f32>;
