//! Mass, energy and their drift along trajectories.

use serde::{Deserialize, Serialize};

use crate::dynamics::{check_product_grid, EvolutionParams, Trajectory};
use crate::error::{Error, Result};
use crate::sht::{SpectralField, SphereGrid};
use crate::spectrum::SpectrumModel;

/// Floor for relative drift normalization when the initial value vanishes.
pub const DRIFT_FLOOR: f64 = 1e-30;

/// 𝓜 = ‖v‖² + 2σ‖u‖², in coefficient space.
pub fn mass(v: &SpectralField, u: &SpectralField, sigma: f64) -> Result<f64> {
    v.check_band(u)?;
    Ok(v.norm_l2_sq() + 2.0 * sigma * u.norm_l2_sq())
}

/// 𝓔 = ∫ |∇v|² + |∇u|² + |v|² + α|u|² + Re(ε₁ v² ū).
///
/// Gradient terms are spectral (Σ μ_k|c_{k,m}|²); the cubic term is a grid
/// quadrature, exact when the grid integrates degree 3K.
pub fn energy(
    v: &SpectralField,
    u: &SpectralField,
    p: &EvolutionParams,
    grid: &SphereGrid,
    model: &SpectrumModel,
) -> Result<f64> {
    v.check_band(u)?;
    check_product_grid(grid, v.band())?;
    let quadratic = v.gradient_norm_sq(model) + u.gradient_norm_sq(model) + v.norm_l2_sq() + p.alpha * u.norm_l2_sq();
    if p.eps1 == crate::dynamics::zero() {
        return Ok(quadratic);
    }
    Ok(quadratic + coupling(v, u, p, grid)?)
}

/// Re(ε₁ ∫ v² ū).
pub fn coupling(v: &SpectralField, u: &SpectralField, p: &EvolutionParams, grid: &SphereGrid) -> Result<f64> {
    let gv = grid.synthesize(v)?;
    let gu = grid.synthesize(u)?;
    let density = gv.zip_map(&gu, |a, b| a * a * b.conj())?;
    Ok((p.eps1 * grid.integrate(&density)?).re)
}

/// Mass and energy along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// max_t |𝓜(t) − 𝓜(0)| / max(|𝓜(0)|, floor).
    pub mass_drift: f64,
    /// max_t |𝓔(t) − 𝓔(0)| / max(|𝓔(0)|, floor).
    pub energy_drift: f64,
    /// ε₁ = conj(ε₂).
    pub mass_conserving: bool,
    /// Real ε₁ = ε₂ with (+,+) signs: the case in which both laws hold.
    pub conservative: bool,
}

/// Relative drift of a sampled quantity.
pub fn relative_drift(values: &[f64]) -> f64 {
    let Some(&x0) = values.first() else {
        return 0.0;
    };
    let scale = x0.abs().max(DRIFT_FLOOR);
    values.iter().map(|x| (x - x0).abs()).fold(0.0, f64::max) / scale
}

pub fn conservation_report(
    traj: &Trajectory,
    p: &EvolutionParams,
    grid: &SphereGrid,
    model: &SpectrumModel,
) -> Result<ConservationReport> {
    if traj.v.len() != traj.times.len() || traj.u.len() != traj.times.len() {
        return Err(Error::Config("trajectory samples and times differ in length".into()));
    }
    let sigma = p.sigma_value();
    let mut masses = Vec::with_capacity(traj.len());
    let mut energies = Vec::with_capacity(traj.len());
    for (_, v, u) in traj.iter() {
        masses.push(mass(v, u, sigma)?);
        energies.push(energy(v, u, p, grid, model)?);
    }
    Ok(ConservationReport {
        times: traj.times.clone(),
        mass_drift: relative_drift(&masses),
        energy_drift: relative_drift(&energies),
        mass: masses,
        energy: energies,
        mass_conserving: p.is_mass_conserving(),
        conservative: p.is_conservative(),
    })
}
