//! The alternative oscillator on the D-dimensional sphere and the two-sheeted
//! hyperboloid.
//!
//! The potential is `2ω²r₀² tan²(χ/2)` on the sphere and `2ω²r₀² tanh²(τ/2)`
//! on the hyperboloid. After separating the angular variables, the
//! quasiradial problem reduces to a Pöschl-Teller (sphere) or modified
//! Pöschl-Teller (hyperboloid) equation with closed-form spectra and
//! eigenfunctions. This crate evaluates those closed forms and checks them
//! against independent numerics:
//!
//! * [`specfun`]: log-gamma and terminating hypergeometric polynomials.
//! * [`model`]: parameters, quantum numbers, potentials and exact spectra.
//! * [`wavefunctions`]: normalized quasiradial functions and their flat limit.
//! * [`oracle`]: finite-volume Sturm-Liouville eigensolver, Gauss-Legendre
//!   quadrature, Richardson extrapolation and ODE residuals.
//! * [`contraction`]: convergence to the flat oscillator as `r₀ → ∞`.
//! * [`cli`]: the `altosc` command-line surface.
//!
//! Units follow `m = ħ = 1`; energies carry `1/length²`.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod contraction;
mod error;
pub mod model;
pub mod oracle;
pub mod par;
pub mod specfun;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use model::{Geometry, ModelParams, QuantumState, SpectralData};
pub use par::Execution;
