use num_complex::Complex64;

use super::{check_product_grid, h1_norm_sq, nonlinear_terms, EvolutionParams, SolverMeta, Trajectory};
use crate::error::{Error, Result};
use crate::sht::{SpectralField, SphereGrid};
use crate::spectrum::SpectrumModel;

/// Panel count for the Duhamel quadrature: ⌈64·T·ω_max⌉, where ω_max is the
/// largest linear frequency |δμ_k + γ| of either group up to `band`.
pub fn recommended_panels(p: &EvolutionParams, band: usize, t_final: f64) -> usize {
    let model = SpectrumModel::S2;
    let omega = (0..=band)
        .flat_map(|k| {
            let mu = model.eigenvalue(k);
            [p.group_v().frequency(mu).abs(), p.group_u().frequency(mu).abs()]
        })
        .fold(0.0, f64::max);
    ((64.0 * t_final * omega).ceil() as usize).max(1)
}

/// Picard iteration of the Duhamel system on `n_t` uniform panels of [0, T].
///
/// Works in the interaction picture: with w(t) = V(−t)v(t),
/// w(t) = v₀ − i∫₀ᵗ V(−t′) N_v(t′) dt′, the integral taken by the cumulative
/// trapezoid rule (and likewise for u with U_σ). Starts from the linear flow
/// and stops when successive iterates differ by less than `tol` in
/// sup-over-time H¹ norm. Samples are the n_t + 1 panel endpoints.
#[allow(clippy::too_many_arguments)]
pub fn picard_iterate(
    v0: &SpectralField,
    u0: &SpectralField,
    p: &EvolutionParams,
    grid: &SphereGrid,
    t_final: f64,
    n_t: usize,
    max_iter: usize,
    tol: f64,
) -> Result<Trajectory> {
    v0.check_band(u0)?;
    check_product_grid(grid, v0.band())?;
    p.validate()?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::Config(format!("final time must be positive, got {t_final}")));
    }
    if n_t == 0 || max_iter == 0 || !(tol > 0.0) {
        return Err(Error::Config("picard needs n_t >= 1, max_iter >= 1 and tol > 0".into()));
    }

    let model = SpectrumModel::S2;
    let band = v0.band();
    let dt = t_final / n_t as f64;
    let times: Vec<f64> = (0..=n_t).map(|n| n as f64 * dt).collect();
    let freq_v: Vec<f64> = (0..=band).map(|k| p.group_v().frequency(model.eigenvalue(k))).collect();
    let freq_u: Vec<f64> = (0..=band).map(|k| p.group_u().frequency(model.eigenvalue(k))).collect();
    let rotate = |f: &SpectralField, freq: &[f64], t: f64| f.map_degrees(|k| Complex64::from_polar(1.0, freq[k] * t));

    let mut v: Vec<SpectralField> = times.iter().map(|&t| rotate(v0, &freq_v, t)).collect();
    let mut u: Vec<SpectralField> = times.iter().map(|&t| rotate(u0, &freq_u, t)).collect();
    let mut next_v = v.clone();
    let mut next_u = u.clone();

    let minus_i = Complex64::new(0.0, -1.0);
    let half = 0.5 * dt;
    let mut contraction = Vec::new();
    let mut previous: Option<f64> = None;

    for iteration in 1..=max_iter {
        let mut acc_v = SpectralField::zeros(band);
        let mut acc_u = SpectralField::zeros(band);
        let mut prev_g: Option<(SpectralField, SpectralField)> = None;
        let mut residual: f64 = 0.0;

        for (n, &t) in times.iter().enumerate() {
            let (nv, nu) = nonlinear_terms(&v[n], &u[n], p, grid)?;
            let g = (rotate(&nv, &freq_v, -t), rotate(&nu, &freq_u, -t));
            if let Some((gv, gu)) = &prev_g {
                acc_v += &(&(gv + &g.0) * half);
                acc_u += &(&(gu + &g.1) * half);
            }
            prev_g = Some(g);

            next_v[n] = rotate(&(v0 + &(&acc_v * minus_i)), &freq_v, t);
            next_u[n] = rotate(&(u0 + &(&acc_u * minus_i)), &freq_u, t);
            let dv = &next_v[n] - &v[n];
            let du = &next_u[n] - &u[n];
            residual = residual.max(h1_norm_sq(&dv, &du).sqrt());
        }

        std::mem::swap(&mut v, &mut next_v);
        std::mem::swap(&mut u, &mut next_u);
        if let Some(r) = previous {
            contraction.push(if r > 0.0 { residual / r } else { 0.0 });
        }
        previous = Some(residual);

        if !residual.is_finite() {
            return Err(Error::NonConvergence {
                iterations: iteration,
                residual,
            });
        }
        if residual < tol {
            return Ok(Trajectory {
                times,
                v,
                u,
                meta: SolverMeta::Picard {
                    panels: n_t,
                    iterations: iteration,
                    residual,
                    contraction,
                },
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: previous.unwrap_or(f64::NAN),
    })
}
