//! Empirical bilinear estimates: products of spherical harmonics of fixed
//! degrees, and space-time products of the two linear groups on dyadically
//! localized data, with log–log exponent fits against min(N, L).
//!
//! Random data only probe the best constant from below; fitted slopes are an
//! empirical lower envelope of the true exponent.

mod engine;

pub use engine::{bilinear_product_norm, required_time_nodes, time_frequency_bound};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::Sign;
use crate::error::{Error, Result};
use crate::rng;
use crate::sht::{SpectralField, SphereGrid};
use crate::sigma::SigmaRational;
use crate::spectrum::{Dyadic, SpectrumModel};

/// Unit-norm field with complex Gaussian coefficients on every degree of the
/// dyadic block N (intersected with k ≤ `band`).
pub fn random_localized(n: Dyadic, band: usize, seed: u64) -> Result<SpectralField> {
    let model = SpectrumModel::S2;
    let range = model
        .block_degrees(n)
        .filter(|r| *r.start() <= band)
        .ok_or_else(|| Error::Config(format!("dyadic block {n} has no degree <= {band}")))?;
    let mut r = rng::stream(seed, &[n.get()]);
    let mut f = SpectralField::zeros(band);
    for k in *range.start()..=(*range.end()).min(band) {
        for c in f.degree_mut(k) {
            *c = rng::complex_gaussian(&mut r);
        }
    }
    let norm = f.norm_l2();
    Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Highest degree of the dyadic block N on 𝕊².
pub fn block_top(n: Dyadic) -> Result<usize> {
    SpectrumModel::S2
        .block_degrees(n)
        .map(|r| *r.end())
        .ok_or_else(|| Error::Config(format!("dyadic block {n} is empty")))
}

/// Random degree-k harmonic: complex Gaussian coefficients with an order
/// envelope exp(−(k−|m|)/τ), τ = k^U, U uniform on [0,1). Small τ concentrates
/// the harmonic on the sectoral orders |m| ≈ k, large τ approaches the
/// isotropic Gaussian ensemble.
pub fn random_harmonic<R: Rng + ?Sized>(k: usize, band: usize, r: &mut R) -> SpectralField {
    let tau = (k.max(1) as f64).powf(r.random::<f64>());
    let mut f = SpectralField::zeros(band);
    for (i, c) in f.degree_mut(k).iter_mut().enumerate() {
        let m = i as i64 - k as i64;
        let envelope = (-((k as i64 - m.abs()) as f64) / tau).exp();
        *c = rng::complex_gaussian(r) * envelope;
    }
    f
}

/// ‖h·h̃‖_{L²} / (‖h‖‖h̃‖) by exact grid quadrature.
pub fn bilinear_ratio_of(h: &SpectralField, ht: &SpectralField, grid: &SphereGrid) -> Result<f64> {
    let (nh, nt) = (h.norm_l2(), ht.norm_l2());
    if nh == 0.0 || nt == 0.0 {
        return Err(Error::Precondition("bilinear ratio of a zero field".into()));
    }
    let top = |f: &SpectralField| f.max_active_degree().unwrap_or(0);
    if grid.exact_degree() < 2 * (top(h) + top(ht)) {
        return Err(Error::Config(format!(
            "grid integrates degree {} exactly, the product needs {}",
            grid.exact_degree(),
            2 * (top(h) + top(ht))
        )));
    }
    let a = grid.synthesize(h)?;
    let b = grid.synthesize(ht)?;
    let q = grid.integrate_real(|j, l| (a.get(j, l) * b.get(j, l)).norm_sqr());
    Ok(q.sqrt() / (nh * nt))
}

/// max over `trials` of ‖H_k H̃_ℓ‖ / (‖H_k‖‖H̃_ℓ‖) for independent random
/// harmonics of degrees k and ℓ.
pub fn projector_bilinear_ratio(k: usize, l: usize, trials: usize, seed: u64, grid: &SphereGrid) -> Result<f64> {
    if k == 0 || l == 0 || trials == 0 {
        return Err(Error::Config("projector ratio needs k, l, trials >= 1".into()));
    }
    let band = k.max(l);
    grid.check_band(band)?;
    let mut best: f64 = 0.0;
    for trial in 0..trials {
        let mut r = rng::stream(seed, &[k as u64, l as u64, trial as u64]);
        let h = random_harmonic(k, band, &mut r);
        let ht = random_harmonic(l, band, &mut r);
        best = best.max(bilinear_ratio_of(&h, &ht, grid)?);
    }
    Ok(best)
}

/// One measured cell of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: u64,
    pub l: u64,
    pub ratio: f64,
}

/// Least-squares line through (log₂ min(N,L), log₂ max ratio in that bucket).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Euclidean norm of the log₂ residuals.
    pub residual: f64,
    /// (min(N,L), max ratio) per bucket, ascending.
    pub buckets: Vec<(u64, f64)>,
    pub cells: Vec<Cell>,
}

pub fn scaling_fit(cells: &[Cell]) -> Result<FitResult> {
    let mut buckets: Vec<(u64, f64)> = Vec::new();
    for c in cells {
        if !(c.ratio > 0.0 && c.ratio.is_finite()) {
            return Err(Error::Config(format!("ratio must be positive and finite, got {}", c.ratio)));
        }
        let key = c.n.min(c.l);
        match buckets.iter_mut().find(|(k, _)| *k == key) {
            Some(b) => b.1 = b.1.max(c.ratio),
            None => buckets.push((key, c.ratio)),
        }
    }
    buckets.sort_by_key(|b| b.0);
    if buckets.len() < 2 {
        return Err(Error::Config("scaling fit needs at least two distinct min(N, L)".into()));
    }
    let xs: Vec<f64> = buckets.iter().map(|b| (b.0 as f64).log2()).collect();
    let ys: Vec<f64> = buckets.iter().map(|b| b.1.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(FitResult {
        slope,
        intercept,
        residual,
        buckets,
        cells: cells.to_vec(),
    })
}

/// Configuration of a space-time bilinear scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_list: Vec<u64>,
    pub l_list: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub sigma: SigmaRational,
    pub sign: Sign,
    /// Time nodes; `None` uses [`required_time_nodes`] per cell.
    pub time_nodes: Option<usize>,
    /// Reference exponent s₀(2).
    pub s0: f64,
}

impl ScanConfig {
    pub fn new(n_list: Vec<u64>, l_list: Vec<u64>, trials: usize, seed: u64, sigma: SigmaRational) -> Self {
        Self {
            n_list,
            l_list,
            trials,
            seed,
            sigma,
            sign: Sign::Plus,
            time_nodes: None,
            s0: 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.n_list.is_empty() || self.l_list.is_empty() {
            return Err(Error::Config("N and L lists must be nonempty".into()));
        }
        for &n in self.n_list.iter().chain(&self.l_list) {
            Dyadic::new(n)?;
        }
        Ok(())
    }
}

/// One (N, L, trial) measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: u64,
    pub l: u64,
    pub trial: usize,
    pub time_nodes: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub records: Vec<TrialRecord>,
    pub fit: FitResult,
}

/// Measure ‖e^{±itΔ/σ}u₀ e^{itΔ}v₀‖ / (‖u₀‖‖v₀‖) for `trials` random localized
/// pairs per cell and fit the exponent of the per-bucket maxima.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let jobs: Vec<(u64, u64, usize)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| cfg.l_list.iter().map(move |&l| (n, l)))
        .flat_map(|(n, l)| (0..cfg.trials).map(move |t| (n, l, t)))
        .collect();

    // One product grid per cell, shared by its trials.
    let mut grids = std::collections::BTreeMap::new();
    for &n in &cfg.n_list {
        for &l in &cfg.l_list {
            let (ku, kv) = (block_top(Dyadic::new(n)?)?, block_top(Dyadic::new(l)?)?);
            if let std::collections::btree_map::Entry::Vacant(e) = grids.entry((n, l)) {
                e.insert(SphereGrid::for_product(ku, kv)?);
            }
        }
    }

    let run = |&(n, l, trial): &(u64, u64, usize)| -> Result<TrialRecord> {
        let (dn, dl) = (Dyadic::new(n)?, Dyadic::new(l)?);
        let (ku, kv) = (block_top(dn)?, block_top(dl)?);
        let grid = &grids[&(n, l)];
        let s = rng::derive_seed(cfg.seed, &[n, l, trial as u64]);
        let u0 = random_localized(dn, ku, rng::derive_seed(s, &[0]))?;
        let v0 = random_localized(dl, kv, rng::derive_seed(s, &[1]))?;
        let nt = cfg.time_nodes.unwrap_or_else(|| required_time_nodes(&u0, &v0, cfg.sigma));
        let ratio = bilinear_product_norm(&u0, &v0, cfg.sigma, cfg.sign, grid, nt)?;
        Ok(TrialRecord {
            n,
            l,
            trial,
            time_nodes: nt,
            ratio,
        })
    };

    #[cfg(feature = "parallel")]
    let records: Result<Vec<TrialRecord>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records: Result<Vec<TrialRecord>> = jobs.iter().map(run).collect();
    let records = records?;

    let cells: Vec<Cell> = records
        .iter()
        .map(|r| Cell {
            n: r.n,
            l: r.l,
            ratio: r.ratio,
        })
        .collect();
    let fit = scaling_fit(&cells)?;
    Ok(ScanResult { records, fit })
}

#[cfg(test)]
mod tests;
