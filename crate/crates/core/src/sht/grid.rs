use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::legendre::{normalized_table, triangle_len, triangle_offset};
use super::quadrature::gauss_legendre;
use super::GridField;
use crate::error::{Error, Result};

/// Largest Legendre table (in f64 entries) a grid may allocate.
const MAX_TABLE_ENTRIES: usize = 1 << 31;

/// Gauss–Legendre colatitude × equispaced longitude grid with precomputed
/// normalized Legendre tables up to the grid band limit.
///
/// The quadrature is exact for any band-limited integrand whose total degree
/// is at most [`SphereGrid::exact_degree`]. The default sizing
/// ([`SphereGrid::new`]) uses n_θ = 2K+2 and n_φ = 4K+2, which integrates
/// products of two band-K fields (degree 4K) exactly.
///
/// Immutable after construction; clones share the tables and FFT plans.
#[derive(Clone)]
pub struct SphereGrid {
    band: usize,
    n_theta: usize,
    n_phi: usize,
    cos_theta: Vec<f64>,
    weights: Vec<f64>,
    legendre: Arc<Vec<f64>>,
    pub(crate) fft_forward: Arc<dyn Fft<f64>>,
    pub(crate) fft_inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphereGrid")
            .field("band", &self.band)
            .field("n_theta", &self.n_theta)
            .field("n_phi", &self.n_phi)
            .finish()
    }
}

impl SphereGrid {
    /// Standard grid for band limit `band` (K ≥ 1): n_θ = 2K+2, n_φ = 4K+2.
    pub fn new(band: usize) -> Result<Self> {
        if band == 0 {
            return Err(Error::Config("grid band limit must be >= 1".into()));
        }
        let n_theta = band
            .checked_mul(2)
            .and_then(|v| v.checked_add(2))
            .ok_or_else(|| Error::Config(format!("grid band limit {band} overflows")))?;
        Self::with_nodes(band, n_theta, 4 * band + 2)
    }

    /// Grid sized so that |f·g|² integrates exactly for band limits `ka`, `kb`,
    /// with tables up to max(ka, kb). n_φ is rounded up to an FFT-friendly size.
    pub fn for_product(ka: usize, kb: usize) -> Result<Self> {
        let band = ka.max(kb).max(1);
        let total = ka + kb;
        let n_theta = (total + 1).max(band + 1);
        let n_phi = smooth_size((2 * total + 1).max(2 * band + 1));
        Self::with_nodes(band, n_theta, n_phi)
    }

    /// Grid with explicit node counts. Requires n_θ ≥ K+1 and n_φ ≥ 2K+1 so
    /// that synthesis/analysis of band-K fields is exact.
    pub fn with_nodes(band: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < band + 1 || n_phi < 2 * band + 1 {
            return Err(Error::Config(format!(
                "grid with band {band} needs n_theta >= {} and n_phi >= {}, got {n_theta} x {n_phi}",
                band + 1,
                2 * band + 1
            )));
        }
        let entries = triangle_len(band)
            .checked_mul(n_theta)
            .filter(|&e| e <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| Error::Config(format!("Legendre table for band {band} is too large")))?;

        let (cos_theta, weights) = gauss_legendre(n_theta);
        let tri = triangle_len(band);
        let mut legendre = vec![0.0; entries];
        let mut column = vec![0.0; tri];
        for (j, &x) in cos_theta.iter().enumerate() {
            normalized_table(band, x, &mut column);
            for (idx, &p) in column.iter().enumerate() {
                legendre[idx * n_theta + j] = p;
            }
        }
        if legendre.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite Legendre table at band {band}")));
        }

        let mut planner = FftPlanner::new();
        Ok(Self {
            band,
            n_theta,
            n_phi,
            cos_theta,
            weights,
            legendre: Arc::new(legendre),
            fft_forward: planner.plan_fft_forward(n_phi),
            fft_inverse: planner.plan_fft_inverse(n_phi),
        })
    }

    /// Band limit of the Legendre tables (largest degree that can be synthesized).
    pub fn band(&self) -> usize {
        self.band
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// cos θ_j at the colatitude nodes (decreasing).
    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    /// Gauss–Legendre weights in x = cos θ (sum to 2).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.cos_theta[j].clamp(-1.0, 1.0).acos()
    }

    pub fn phi(&self, l: usize) -> f64 {
        2.0 * PI * l as f64 / self.n_phi as f64
    }

    /// Largest total harmonic degree integrated exactly by the quadrature.
    pub fn exact_degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi - 1)
    }

    /// P̄_k^m at every colatitude node, 0 ≤ m ≤ k ≤ band.
    pub fn legendre_row(&self, k: usize, m: usize) -> &[f64] {
        debug_assert!(m <= k && k <= self.band);
        let idx = triangle_offset(self.band, m) + (k - m);
        &self.legendre[idx * self.n_theta..(idx + 1) * self.n_theta]
    }

    /// Contiguous block of rows P̄_k^m for k = m..=band, laid out k-major.
    pub(crate) fn legendre_block(&self, m: usize) -> &[f64] {
        let start = triangle_offset(self.band, m) * self.n_theta;
        let len = (self.band - m + 1) * self.n_theta;
        &self.legendre[start..start + len]
    }

    /// Quadrature weight of node (j, l): w_j · 2π / n_φ.
    pub fn node_weight(&self, j: usize) -> f64 {
        self.weights[j] * 2.0 * PI / self.n_phi as f64
    }

    /// ∫_{𝕊²} f dS by the grid quadrature.
    pub fn integrate(&self, f: &GridField) -> Result<Complex64> {
        self.check_shape(f)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, row) in f.values().chunks_exact(self.n_phi).enumerate() {
            let s: Complex64 = row.iter().sum();
            acc += s * self.node_weight(j);
        }
        Ok(acc)
    }

    /// ∫_{𝕊²} g dS for a real-valued integrand given pointwise.
    pub fn integrate_real<F: Fn(usize, usize) -> f64>(&self, g: F) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.n_theta {
            let s: f64 = (0..self.n_phi).map(|l| g(j, l)).sum();
            acc += s * self.node_weight(j);
        }
        acc
    }

    pub(crate) fn check_shape(&self, f: &GridField) -> Result<()> {
        if f.shape() != self.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                got: f.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_band(&self, band: usize) -> Result<()> {
        if band > self.band {
            return Err(Error::BandLimitMismatch {
                left: band,
                right: self.band,
            });
        }
        Ok(())
    }
}

/// Smallest 2^a·3^b·5^c that is ≥ n.
fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}
