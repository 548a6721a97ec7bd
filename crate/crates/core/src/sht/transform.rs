use num_complex::Complex64;
use std::f64::consts::PI;

use super::{GridField, SpectralField, SphereGrid};
use crate::error::Result;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl SphereGrid {
    /// Evaluate Σ c_{k,m} Y_{k,m} at every grid node.
    ///
    /// Exact (to round-off) for any field with band ≤ the grid band.
    pub fn synthesize(&self, field: &SpectralField) -> Result<GridField> {
        self.check_band(field.band())?;
        let (nt, np) = self.shape();
        let band = field.band();
        let mut buf = vec![ZERO; nt * np];
        for m in 0..=band {
            for sign in [1i64, -1] {
                let mm = sign * m as i64;
                if m == 0 && sign < 0 {
                    continue;
                }
                let slot = mm.rem_euclid(np as i64) as usize;
                for k in m..=band {
                    let c = field.get(k, mm);
                    if c == ZERO {
                        continue;
                    }
                    for (j, &p) in self.legendre_row(k, m).iter().enumerate() {
                        buf[j * np + slot] += c * p;
                    }
                }
            }
        }
        self.fft_inverse.process(&mut buf);
        GridField::from_values((nt, np), buf)
    }

    /// Project grid values onto the harmonics of degree ≤ grid band.
    pub fn analyze(&self, f: &GridField) -> Result<SpectralField> {
        self.analyze_band(f, self.band())
    }

    /// Project grid values onto the harmonics of degree ≤ `band`.
    ///
    /// Exact when the sampled function is band-limited to degree
    /// `exact_degree() − band`.
    pub fn analyze_band(&self, f: &GridField, band: usize) -> Result<SpectralField> {
        self.check_shape(f)?;
        self.check_band(band)?;
        let (nt, np) = self.shape();
        let mut buf = f.values().to_vec();
        self.fft_forward.process(&mut buf);
        let scale: Vec<f64> = (0..nt).map(|j| 2.0 * PI * self.weights()[j] / np as f64).collect();
        let mut out = SpectralField::zeros(band);
        for m in 0..=band {
            for sign in [1i64, -1] {
                let mm = sign * m as i64;
                if m == 0 && sign < 0 {
                    continue;
                }
                let slot = mm.rem_euclid(np as i64) as usize;
                let column: Vec<Complex64> = (0..nt).map(|j| buf[j * np + slot] * scale[j]).collect();
                for k in m..=band {
                    let row = self.legendre_row(k, m);
                    let c: Complex64 = row.iter().zip(&column).map(|(&p, &g)| g * p).sum();
                    out.set(k, mm, c);
                }
            }
        }
        Ok(out)
    }

    /// Pointwise product of two spectral fields, projected back to `band`.
    pub fn multiply(&self, a: &SpectralField, b: &SpectralField, band: usize) -> Result<SpectralField> {
        let ga = self.synthesize(a)?;
        let gb = self.synthesize(b)?;
        let prod = ga.zip_map(&gb, |x, y| x * y)?;
        self.analyze_band(&prod, band)
    }
}
