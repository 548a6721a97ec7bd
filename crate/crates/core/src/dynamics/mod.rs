//! Linear groups, the quadratic nonlinearity and the two nonlinear solvers.

mod params;
mod picard;
pub(crate) mod splitstep;

pub use params::{EvolutionParams, GroupSpec, Sign};
pub use picard::{picard_iterate, recommended_panels};
pub use splitstep::{splitstep_evolve, SplitStep, Substep};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sht::{SpectralField, SphereGrid};
use crate::spectrum::SpectrumModel;

/// c_{k,m} ↦ exp(it(−δμ_k − γ)) c_{k,m}.
pub fn linear_propagate(f: &SpectralField, spec: GroupSpec, t: f64, model: &SpectrumModel) -> SpectralField {
    f.map_degrees(|k| spec.phase(model.eigenvalue(k), t))
}

/// Grid-evaluated right-hand sides (ε₁ u v̄, ε₂ v²/(2σ)), projected to the
/// common band limit of the inputs.
///
/// The grid must integrate degree-3K integrands exactly so that the
/// projection of the degree-2K products is free of aliasing.
pub fn nonlinear_terms(
    v: &SpectralField,
    u: &SpectralField,
    p: &EvolutionParams,
    grid: &SphereGrid,
) -> Result<(SpectralField, SpectralField)> {
    v.check_band(u)?;
    let band = v.band();
    check_product_grid(grid, band)?;
    let gv = grid.synthesize(v)?;
    let gu = grid.synthesize(u)?;
    let e1 = p.eps1;
    let e2 = p.eps2 / (2.0 * p.sigma_value());
    let nv = gu.zip_map(&gv, |a, b| e1 * a * b.conj())?;
    let nu = gv.map(|a| e2 * a * a);
    Ok((grid.analyze_band(&nv, band)?, grid.analyze_band(&nu, band)?))
}

pub fn check_product_grid(grid: &SphereGrid, band: usize) -> Result<()> {
    grid.check_band(band)?;
    if grid.exact_degree() < 3 * band {
        return Err(Error::Config(format!(
            "grid integrates degree {} exactly; quadratic terms at band {band} need {}",
            grid.exact_degree(),
            3 * band
        )));
    }
    Ok(())
}

/// Which solver produced a trajectory, with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "snake_case")]
pub enum SolverMeta {
    Picard {
        panels: usize,
        iterations: usize,
        residual: f64,
        /// residual_i / residual_{i−1} for each iteration after the first.
        contraction: Vec<f64>,
    },
    SplitStep {
        dt: f64,
        steps: usize,
        substep: Substep,
    },
}

/// Sampled solution (v(t), u(t)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub v: Vec<SpectralField>,
    pub u: Vec<SpectralField>,
    pub meta: SolverMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn band(&self) -> usize {
        self.v.first().map_or(0, |f| f.band())
    }

    pub fn final_state(&self) -> Option<(&SpectralField, &SpectralField)> {
        Some((self.v.last()?, self.u.last()?))
    }

    /// Samples as (t, v, u).
    pub fn iter(&self) -> impl Iterator<Item = (f64, &SpectralField, &SpectralField)> {
        self.times.iter().zip(&self.v).zip(&self.u).map(|((&t, v), u)| (t, v, u))
    }
}

/// The exact linear flow sampled at `times`.
pub fn linear_trajectory(
    v0: &SpectralField,
    u0: &SpectralField,
    p: &EvolutionParams,
    times: &[f64],
) -> Trajectory {
    let model = SpectrumModel::S2;
    Trajectory {
        times: times.to_vec(),
        v: times.iter().map(|&t| linear_propagate(v0, p.group_v(), t, &model)).collect(),
        u: times.iter().map(|&t| linear_propagate(u0, p.group_u(), t, &model)).collect(),
        meta: SolverMeta::SplitStep {
            dt: 0.0,
            steps: 0,
            substep: Substep::Projected,
        },
    }
}

/// ‖(v, u)‖²_{H¹} = Σ (1 + μ_k)(|v_{k,m}|² + |u_{k,m}|²), the energy-space norm.
pub fn h1_norm_sq(v: &SpectralField, u: &SpectralField) -> f64 {
    let model = SpectrumModel::S2;
    let one = |f: &SpectralField| f.gradient_norm_sq(&model) + f.norm_l2_sq();
    one(v) + one(u)
}

pub(crate) fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}
