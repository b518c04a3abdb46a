//! Quantum Brownian motion of the rigid phase of an incommensurate
//! charge-density-wave ring coupled to a power-law harmonic bath.
//!
//! The numerical core is generic over the scalar type through [`Real`]
//! (implemented for `f32` and `f64`). Aliases with an `F64` suffix fix the
//! scalar to `f64`, which is what the command-line tool and most tests use.
//!
//! Module overview:
//! - [`specfun`]: Mittag-Leffler, ₁F₂, sinc and a Talbot inverse Laplace rule.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature.
//! - [`bath`]: spectral density, memory kernel and noise kernel.
//! - [`dynamics`]: fundamental solution G(t), classical paths and action.
//! - [`decoherence`]: noise action, early-time Γ, decoherence timescales.
//! - [`ring`]: ring states and expectation values of the winding operator.
//! - [`oracle`]: explicit discretized bath used as brute-force ground truth.
//! - [`params`]: physical parameter derivations.

// `!(x > 0)` style guards deliberately reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod constants;
pub mod decoherence;
pub mod dynamics;
mod error;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod ring;
mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type BathSpecF64 = bath::BathSpec<f64>;
pub type BathSpecF32 = bath::BathSpec<f32>;
pub type SeriesControlF64 = specfun::SeriesControl<f64>;
pub type QuadControlF64 = quad::QuadControl<f64>;
pub type FundamentalSolutionF64 = dynamics::FundamentalSolution<f64>;
pub type PathBoundaryF64 = dynamics::PathBoundary<f64>;
pub type RingStateF64 = ring::RingState<f64>;
pub type WindingTermsF64 = ring::WindingTerms<f64>;
pub type GammaResultF64 = decoherence::GammaResult<f64>;
pub type DiscreteBathF64 = oracle::DiscreteBath<f64>;
pub type RingSpecF64 = params::RingSpec<f64>;
pub type CircuitSpecF64 = params::CircuitSpec<f64>;
pub type CommensurabilitySpecF64 = params::CommensurabilitySpec<f64>;
pub type DerivedScalesF64 = params::DerivedScales<f64>;
pub type Complex64 = Complex<f64>;
