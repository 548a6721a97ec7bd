use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::SphereGrid;
use crate::error::{Error, Result};
use crate::spectrum::{japanese_bracket, Dyadic, SpectrumModel};

/// Harmonic index (k, m) with |m| ≤ k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub k: usize,
    pub m: i64,
}

impl HarmonicIndex {
    pub fn new(k: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > k {
            return Err(Error::Precondition(format!("order |m| = {} exceeds degree k = {k}", m.abs())));
        }
        Ok(Self { k, m })
    }

    /// Position in the (k, m)-ordered coefficient vector: k² + k + m.
    pub fn linear(self) -> usize {
        index(self.k, self.m)
    }
}

/// Coefficients c_{k,m}, 0 ≤ k ≤ K, |m| ≤ k, of an expansion in the
/// orthonormal basis Y_{k,m}. Stored degree-major (index k² + k + m), so the
/// L² norm is the Euclidean norm of the coefficient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    band: usize,
    coeffs: Vec<Complex64>,
}

fn index(k: usize, m: i64) -> usize {
    ((k * k + k) as i64 + m) as usize
}

impl SpectralField {
    pub fn zeros(band: usize) -> Self {
        Self {
            band,
            coeffs: vec![Complex64::new(0.0, 0.0); (band + 1) * (band + 1)],
        }
    }

    pub fn from_coeffs(band: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != (band + 1) * (band + 1) {
            return Err(Error::Config(format!(
                "band {band} needs {} coefficients, got {}",
                (band + 1) * (band + 1),
                coeffs.len()
            )));
        }
        Ok(Self { band, coeffs })
    }

    pub fn from_fn<F: FnMut(HarmonicIndex) -> Complex64>(band: usize, mut f: F) -> Self {
        let mut out = Self::zeros(band);
        for k in 0..=band {
            for m in -(k as i64)..=(k as i64) {
                out.coeffs[index(k, m)] = f(HarmonicIndex { k, m });
            }
        }
        out
    }

    /// A single basis harmonic `value`·Y_{k,m}.
    pub fn single_mode(band: usize, k: usize, m: i64, value: Complex64) -> Result<Self> {
        let idx = HarmonicIndex::new(k, m)?;
        if k > band {
            return Err(Error::BandLimitMismatch { left: k, right: band });
        }
        let mut out = Self::zeros(band);
        out.coeffs[idx.linear()] = value;
        Ok(out)
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, k: usize, m: i64) -> Complex64 {
        self.coeffs[index(k, m)]
    }

    pub fn set(&mut self, k: usize, m: i64, value: Complex64) {
        assert!(k <= self.band && m.unsigned_abs() as usize <= k);
        self.coeffs[index(k, m)] = value;
    }

    /// Coefficients of degree k, ordered m = −k..=k.
    pub fn degree(&self, k: usize) -> &[Complex64] {
        &self.coeffs[k * k..(k + 1) * (k + 1)]
    }

    pub fn degree_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.coeffs[k * k..(k + 1) * (k + 1)]
    }

    /// ‖P_k f‖² for each degree.
    pub fn degree_energies(&self) -> Vec<f64> {
        (0..=self.band)
            .map(|k| self.degree(k).iter().map(|c| c.norm_sqr()).sum())
            .collect()
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn max_active_degree(&self) -> Option<usize> {
        (0..=self.band)
            .rev()
            .find(|&k| self.degree(k).iter().any(|c| *c != Complex64::new(0.0, 0.0)))
    }

    pub fn norm_l2_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_sq().sqrt()
    }

    /// ⟨f, g⟩ = Σ conj(f_{k,m}) g_{k,m}.
    pub fn l2_inner(&self, other: &SpectralField) -> Result<Complex64> {
        self.check_band(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// ‖∇f‖² = Σ μ_k |c_{k,m}|².
    pub fn gradient_norm_sq(&self, model: &SpectrumModel) -> f64 {
        self.degree_energies()
            .iter()
            .enumerate()
            .map(|(k, e)| model.eigenvalue(k) * e)
            .sum()
    }

    /// H^s norm (Σ ⟨μ_k⟩^s |c_{k,m}|²)^{1/2}.
    pub fn sobolev_norm(&self, s: f64, model: &SpectrumModel) -> f64 {
        self.degree_energies()
            .iter()
            .enumerate()
            .map(|(k, e)| japanese_bracket(model.eigenvalue(k)).powf(s) * e)
            .sum::<f64>()
            .sqrt()
    }

    /// P_k f: keep degree k only.
    pub fn project_degree(&self, k: usize) -> SpectralField {
        let mut out = Self::zeros(self.band);
        if k <= self.band {
            out.degree_mut(k).copy_from_slice(self.degree(k));
        }
        out
    }

    /// Π_N f: keep degrees with N ≤ ⟨μ_k⟩^{1/2} < 2N.
    pub fn dyadic_project(&self, n: Dyadic, model: &SpectrumModel) -> SpectralField {
        let mut out = Self::zeros(self.band);
        if let Some(range) = model.block_degrees(n) {
            for k in range.filter(|&k| k <= self.band) {
                out.degree_mut(k).copy_from_slice(self.degree(k));
            }
        }
        out
    }

    /// Truncate or zero-pad to a new band limit.
    pub fn with_band(&self, band: usize) -> SpectralField {
        let mut out = Self::zeros(band);
        let keep = (band.min(self.band) + 1).pow(2);
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        out
    }

    /// Coefficients of the pointwise complex conjugate: c'_{k,m} = conj(c_{k,−m}).
    pub fn conj(&self) -> SpectralField {
        let mut out = Self::zeros(self.band);
        for k in 0..=self.band {
            let src = self.degree(k);
            let dst = out.degree_mut(k);
            let n = src.len();
            for (i, d) in dst.iter_mut().enumerate() {
                *d = src[n - 1 - i].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> SpectralField {
        SpectralField {
            band: self.band,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiply every degree-k block by `phase(k)`.
    pub fn map_degrees<F: Fn(usize) -> Complex64>(&self, phase: F) -> SpectralField {
        let mut out = self.clone();
        for k in 0..=self.band {
            let p = phase(k);
            for c in out.degree_mut(k) {
                *c *= p;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> Result<f64> {
        self.check_band(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn check_band(&self, other: &SpectralField) -> Result<()> {
        if self.band != other.band {
            return Err(Error::BandLimitMismatch {
                left: self.band,
                right: other.band,
            });
        }
        Ok(())
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        assert_eq!(self.band, rhs.band, "band limit mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        assert_eq!(self.band, rhs.band, "band limit mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Mul<Complex64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: Complex64) -> SpectralField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Complex values on the nodes of a [`SphereGrid`], row-major in (θ_j, φ_l).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n_theta: usize,
    n_phi: usize,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(shape: (usize, usize)) -> Self {
        Self {
            n_theta: shape.0,
            n_phi: shape.1,
            values: vec![Complex64::new(0.0, 0.0); shape.0 * shape.1],
        }
    }

    pub fn from_values(shape: (usize, usize), values: Vec<Complex64>) -> Result<Self> {
        if values.len() != shape.0 * shape.1 {
            return Err(Error::DimensionMismatch {
                expected: shape,
                got: (values.len(), 1),
            });
        }
        Ok(Self {
            n_theta: shape.0,
            n_phi: shape.1,
            values,
        })
    }

    /// Sample `f(θ, φ)` at every node of `grid`.
    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(grid: &SphereGrid, f: F) -> Self {
        let (nt, np) = grid.shape();
        let mut values = Vec::with_capacity(nt * np);
        for j in 0..nt {
            let theta = grid.theta(j);
            for l in 0..np {
                values.push(f(theta, grid.phi(l)));
            }
        }
        Self {
            n_theta: nt,
            n_phi: np,
            values,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.values[j * self.n_phi + l]
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> GridField {
        GridField {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &GridField, f: F) -> Result<GridField> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(GridField {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn conj(&self) -> GridField {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
