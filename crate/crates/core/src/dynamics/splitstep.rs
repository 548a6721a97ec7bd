use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_product_grid, linear_propagate, nonlinear_terms, EvolutionParams, SolverMeta, Trajectory};
use crate::error::{Error, Result};
use crate::observables::mass;
use crate::sht::{GridField, SpectralField, SphereGrid};
use crate::spectrum::SpectrumModel;

/// How the nonlinear substep v_t = −iε₁uv̄, u_t = −i(ε₂/2σ)v² is integrated
/// (classical RK4 in both cases).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Substep {
    /// Every RK4 stage is evaluated on the grid and projected back to the band
    /// limit, i.e. RK4 on the Galerkin-truncated ODE. Conserves the discrete
    /// mass to the order of the ODE solver.
    #[default]
    Projected,
    /// RK4 on raw grid values, one projection per substep. Conserves the
    /// pointwise density |v|² + 2σ|u|², but the final projection removes the
    /// aliased part of the update and leaks mass at first order in dt.
    Pointwise,
}

/// Strang splitting N(dt/2) ∘ L(dt) ∘ N(dt/2) with the exact linear flow L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStep {
    pub dt: f64,
    pub substep: Substep,
    /// Record every `sample_every`-th step (the final state is always recorded).
    pub sample_every: usize,
}

impl SplitStep {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            substep: Substep::Projected,
            sample_every: 1,
        }
    }

    pub fn substep(mut self, s: Substep) -> Self {
        self.substep = s;
        self
    }

    pub fn sample_every(mut self, n: usize) -> Self {
        self.sample_every = n.max(1);
        self
    }

    /// Evolve to `t_final`. The step is shrunk to T/⌈T/dt⌉ when dt does not
    /// divide T.
    pub fn run(
        &self,
        v0: &SpectralField,
        u0: &SpectralField,
        p: &EvolutionParams,
        grid: &SphereGrid,
        t_final: f64,
    ) -> Result<Trajectory> {
        v0.check_band(u0)?;
        check_product_grid(grid, v0.band())?;
        p.validate()?;
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Config(format!("final time must be positive, got {t_final}")));
        }
        if !(self.dt > 0.0 && self.dt <= t_final * (1.0 + 1e-12)) {
            return Err(Error::Config(format!("need 0 < dt <= T, got dt = {} and T = {t_final}", self.dt)));
        }
        let steps = {
            let r = t_final / self.dt;
            if (r - r.round()).abs() < 1e-9 * r {
                r.round() as usize
            } else {
                r.ceil() as usize
            }
        };
        let dt = t_final / steps as f64;
        let model = SpectrumModel::S2;
        let sigma = p.sigma_value();
        let m0 = mass(v0, u0, sigma)?;

        let mut v = v0.clone();
        let mut u = u0.clone();
        let mut times = vec![0.0];
        let mut vs = vec![v.clone()];
        let mut us = vec![u.clone()];
        let coupled = !p.is_linear();

        for step in 1..=steps {
            let t = step as f64 * dt;
            if coupled {
                (v, u) = self.nonlinear_half(&v, &u, p, grid, 0.5 * dt)?;
            }
            v = linear_propagate(&v, p.group_v(), dt, &model);
            u = linear_propagate(&u, p.group_u(), dt, &model);
            if coupled {
                (v, u) = self.nonlinear_half(&v, &u, p, grid, 0.5 * dt)?;
            }

            if !v.is_finite() || !u.is_finite() {
                return Err(Error::BlowUp {
                    time: t,
                    reason: "non-finite coefficient".into(),
                });
            }
            let m = mass(&v, &u, sigma)?;
            if m0 > 0.0 && m > 10.0 * m0 {
                return Err(Error::BlowUp {
                    time: t,
                    reason: format!("mass grew from {m0:.6e} to {m:.6e}"),
                });
            }
            if step % self.sample_every == 0 || step == steps {
                times.push(t);
                vs.push(v.clone());
                us.push(u.clone());
            }
        }

        Ok(Trajectory {
            times,
            v: vs,
            u: us,
            meta: SolverMeta::SplitStep {
                dt,
                steps,
                substep: self.substep,
            },
        })
    }

    fn nonlinear_half(
        &self,
        v: &SpectralField,
        u: &SpectralField,
        p: &EvolutionParams,
        grid: &SphereGrid,
        h: f64,
    ) -> Result<(SpectralField, SpectralField)> {
        match self.substep {
            Substep::Projected => rk4_projected(v, u, p, grid, h),
            Substep::Pointwise => {
                let band = v.band();
                let mut gv = grid.synthesize(v)?;
                let mut gu = grid.synthesize(u)?;
                rk4_pointwise(&mut gv, &mut gu, p, h);
                Ok((grid.analyze_band(&gv, band)?, grid.analyze_band(&gu, band)?))
            }
        }
    }
}

/// Strang split-step solution sampled at every step.
pub fn splitstep_evolve(
    v0: &SpectralField,
    u0: &SpectralField,
    p: &EvolutionParams,
    grid: &SphereGrid,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    SplitStep::new(dt).run(v0, u0, p, grid, t_final)
}

fn rk4_projected(
    v: &SpectralField,
    u: &SpectralField,
    p: &EvolutionParams,
    grid: &SphereGrid,
    h: f64,
) -> Result<(SpectralField, SpectralField)> {
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |v: &SpectralField, u: &SpectralField| -> Result<(SpectralField, SpectralField)> {
        let (nv, nu) = nonlinear_terms(v, u, p, grid)?;
        Ok((&nv * minus_i, &nu * minus_i))
    };
    let (k1v, k1u) = rhs(v, u)?;
    let (k2v, k2u) = rhs(&(v + &(&k1v * (0.5 * h))), &(u + &(&k1u * (0.5 * h))))?;
    let (k3v, k3u) = rhs(&(v + &(&k2v * (0.5 * h))), &(u + &(&k2u * (0.5 * h))))?;
    let (k4v, k4u) = rhs(&(v + &(&k3v * h)), &(u + &(&k3u * h)))?;
    let combine = |x: &SpectralField, a: &SpectralField, b: &SpectralField, c: &SpectralField, d: &SpectralField| {
        let mut out = x.clone();
        for (i, o) in out.coeffs_mut().iter_mut().enumerate() {
            *o += (a.coeffs()[i] + 2.0 * b.coeffs()[i] + 2.0 * c.coeffs()[i] + d.coeffs()[i]) * (h / 6.0);
        }
        out
    };
    Ok((combine(v, &k1v, &k2v, &k3v, &k4v), combine(u, &k1u, &k2u, &k3u, &k4u)))
}

/// One RK4 step of the pointwise quadratic ODE at every grid node.
pub(crate) fn rk4_pointwise(gv: &mut GridField, gu: &mut GridField, p: &EvolutionParams, h: f64) {
    let e1 = p.eps1 * Complex64::new(0.0, -1.0);
    let e2 = p.eps2 * Complex64::new(0.0, -1.0) / (2.0 * p.sigma_value());
    let f = |v: Complex64, u: Complex64| (e1 * u * v.conj(), e2 * v * v);
    for (v, u) in gv.values_mut().iter_mut().zip(gu.values_mut().iter_mut()) {
        let (a1, b1) = f(*v, *u);
        let (a2, b2) = f(*v + a1 * (0.5 * h), *u + b1 * (0.5 * h));
        let (a3, b3) = f(*v + a2 * (0.5 * h), *u + b2 * (0.5 * h));
        let (a4, b4) = f(*v + a3 * h, *u + b3 * h);
        *v += (a1 + 2.0 * a2 + 2.0 * a3 + a4) * (h / 6.0);
        *u += (b1 + 2.0 * b2 + 2.0 * b3 + b4) * (h / 6.0);
    }
}
