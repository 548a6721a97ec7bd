use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::SpectrumModel;

/// Cluster k of a Zoll spectrum: midpoint (k + Z₀/4)² and the interval
/// [midpoint − E, midpoint + E] that contains the true eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZollCluster {
    pub k: usize,
    pub midpoint: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Clusters k = 1..=count.
pub fn zoll_spectrum(z0: u32, spread: f64, count: usize) -> Result<Vec<ZollCluster>> {
    if count == 0 {
        return Err(Error::Config("zoll_spectrum needs count >= 1".into()));
    }
    let model = SpectrumModel::zoll(z0, spread)?;
    Ok((1..=count)
        .map(|k| {
            let mid = model.eigenvalue(k);
            ZollCluster {
                k,
                midpoint: mid,
                lower: mid - spread,
                upper: mid + spread,
            }
        })
        .collect())
}

/// K₀ = min{k ∈ ℕ : k > E − Z₀/4 − 1/2}; clusters k, k+1 are disjoint for k ≥ K₀.
pub fn zoll_k0(z0: u32, spread: f64) -> usize {
    let threshold = spread - z0 as f64 / 4.0 - 0.5;
    if threshold < 0.0 {
        return 0;
    }
    threshold.floor() as usize + 1
}

/// Eigenvalues of −Δ on 𝕊^d not exceeding A, counted with multiplicity.
pub fn weyl_count(dim: u32, a: f64) -> Result<u128> {
    let model = SpectrumModel::sphere(dim)?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::Config(format!("Weyl threshold must be finite and >= 0, got {a}")));
    }
    let mut total = 0u128;
    let mut k = 0;
    while model.eigenvalue(k) <= a {
        total += model.multiplicity(k).expect("sphere multiplicity");
        k += 1;
    }
    Ok(total)
}

/// ♯{eigenvalues ≤ A} / A^{d/2}, for A ≥ 1.
pub fn weyl_ratio(dim: u32, a: f64) -> Result<f64> {
    if !(a >= 1.0) {
        return Err(Error::Config(format!("Weyl ratio needs A >= 1, got {a}")));
    }
    Ok(weyl_count(dim, a)? as f64 / a.powf(dim as f64 / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_midpoints() {
        let c = zoll_spectrum(2, 0.5, 3).unwrap();
        assert_eq!(c[0].midpoint, 2.25);
        assert_eq!(c[0].lower, 1.75);
        assert_eq!(zoll_spectrum(0, 1.0, 3).unwrap()[2].midpoint, 9.0);
        assert!(zoll_spectrum(0, 1.0, 0).is_err());
        assert!(zoll_spectrum(0, -1.0, 2).is_err());
    }

    #[test]
    fn k0_is_the_disjointness_threshold() {
        for z0 in 0..6 {
            for e in [0.1, 0.5, 1.0, 2.3, 7.75, 12.0] {
                let k0 = zoll_k0(z0, e);
                let c = zoll_spectrum(z0, e, k0 + 40).unwrap();
                let disjoint = |k: usize| {
                    let a = SpectrumModel::zoll(z0, e).unwrap();
                    a.eigenvalue(k) + e < a.eigenvalue(k + 1) - e
                };
                for w in c.windows(2).filter(|w| w[0].k >= k0) {
                    assert!(w[0].upper < w[1].lower, "z0 {z0} e {e} k {}", w[0].k);
                }
                if k0 > 0 {
                    assert!(!disjoint(k0 - 1), "K0 not minimal for z0 {z0} e {e}");
                }
            }
        }
    }

    #[test]
    fn weyl_small_cases() {
        assert!((weyl_ratio(2, 12.0).unwrap() - 16.0 / 12.0).abs() < 1e-15);
        assert_eq!(weyl_ratio(2, 1.0).unwrap(), 1.0);
        assert!(weyl_ratio(2, 0.0).is_err());
        assert_eq!(weyl_count(3, 3.0).unwrap(), 5);
    }
}
