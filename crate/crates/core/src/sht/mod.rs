//! Spherical-harmonic analysis and synthesis on 𝕊².
//!
//! Basis convention: Y_{k,m}(θ,φ) = P̄_k^{|m|}(cos θ) e^{imφ} with P̄ the fully
//! normalized associated Legendre functions (no Condon–Shortley phase), so
//! that ∫|Y_{k,m}|² dS = 1 and conj(Y_{k,m}) = Y_{k,−m}.

mod field;
mod grid;
pub mod legendre;
pub mod quadrature;
mod transform;

pub use field::{GridField, HarmonicIndex, SpectralField};
pub use grid::SphereGrid;
