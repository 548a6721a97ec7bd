//! Spectral simulator and verification laboratory for the quadratic
//! second-harmonic-generation Schrödinger system on the 2-sphere,
//!
//! ```text
//! i v_t + Δv - v         = ε₁ u v̄
//! i u_t + Δu/σ - αu/σ    = ε₂ v² / (2σ)
//! ```
//!
//! The crate is split into:
//!
//! * [`sht`]: spherical-harmonic analysis/synthesis on a Gauss–Legendre grid,
//!   spectral fields, projectors and Sobolev norms;
//! * [`spectrum`]: eigenvalue models (round sphere, synthetic Zoll spectrum)
//!   and dyadic frequency blocks;
//! * [`dynamics`]: the linear groups, the quadratic nonlinearity, and two
//!   nonlinear solvers (Duhamel/Picard and Strang split-step);
//! * [`observables`]: mass, energy and drift reports;
//! * [`resonance`]: exact integer counting of the resonance sets, divisor
//!   machinery, Zoll clusters and Weyl counts;
//! * [`strichartz`]: empirical bilinear (spectral and space-time) estimates
//!   and log–log exponent fits;
//! * [`inequalities`]: Gagliardo–Nirenberg ratios, constant calibration and
//!   the a-priori H¹ bound.

pub mod dynamics;
pub mod error;
pub mod inequalities;
pub mod observables;
pub mod resonance;
pub mod rng;
pub mod sht;
pub mod sigma;
pub mod spectrum;
pub mod strichartz;

pub use error::{Error, Result};
pub use sht::{GridField, HarmonicIndex, SpectralField, SphereGrid};
pub use sigma::SigmaRational;
pub use spectrum::{Dyadic, SpectrumModel};

pub use num_complex::Complex64;

/// Library version, echoed into run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
