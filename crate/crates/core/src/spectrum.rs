//! Eigenvalue models and dyadic frequency blocks.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Japanese bracket ⟨x⟩ = (1 + x²)^{1/2}.
pub fn japanese_bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

/// Eigenvalue generator for −Δ.
///
/// `Sphere { dim }` is the round sphere 𝕊^d with μ_k = k(k+d−1); `Zoll` is the
/// synthetic cluster-midpoint spectrum μ★_k = (k + Z₀/4)² of a Zoll surface
/// whose true spectrum lies within `spread` of those midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectrumModel {
    Sphere { dim: u32 },
    Zoll { z0: u32, spread: f64 },
}

/// An eigenvalue held as an exact fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactEigenvalue {
    pub num: u128,
    pub den: u128,
}

impl ExactEigenvalue {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl SpectrumModel {
    /// The round 2-sphere.
    pub const S2: SpectrumModel = SpectrumModel::Sphere { dim: 2 };

    pub fn sphere(dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!("sphere dimension must be >= 2, got {dim}")));
        }
        Ok(SpectrumModel::Sphere { dim })
    }

    pub fn zoll(z0: u32, spread: f64) -> Result<Self> {
        if !(spread > 0.0 && spread.is_finite()) {
            return Err(Error::Config(format!("Zoll spread E must be positive, got {spread}")));
        }
        Ok(SpectrumModel::Zoll { z0, spread })
    }

    /// Dimension of the underlying manifold.
    pub fn dim(&self) -> u32 {
        match *self {
            SpectrumModel::Sphere { dim } => dim,
            SpectrumModel::Zoll { .. } => 2,
        }
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        match *self {
            SpectrumModel::Sphere { dim } => {
                let k = k as f64;
                k * (k + dim as f64 - 1.0)
            }
            SpectrumModel::Zoll { z0, .. } => {
                let shifted = k as f64 + z0 as f64 / 4.0;
                shifted * shifted
            }
        }
    }

    pub fn exact_eigenvalue(&self, k: usize) -> ExactEigenvalue {
        let k = k as u128;
        match *self {
            SpectrumModel::Sphere { dim } => ExactEigenvalue {
                num: k * (k + dim as u128 - 1),
                den: 1,
            },
            SpectrumModel::Zoll { z0, .. } => {
                let q = 4 * k + z0 as u128;
                ExactEigenvalue { num: q * q, den: 16 }
            }
        }
    }

    /// ⟨μ_k⟩^{1/2}, the frequency scale that dyadic blocks are cut on.
    pub fn frequency(&self, k: usize) -> f64 {
        japanese_bracket(self.eigenvalue(k)).sqrt()
    }

    /// Exact test of N ≤ ⟨μ_k⟩^{1/2} < 2N.
    pub fn in_block(&self, k: usize, n: Dyadic) -> bool {
        let ExactEigenvalue { num, den } = self.exact_eigenvalue(k);
        let n4 = (n.get() as u128).pow(4);
        let den2 = den * den;
        let lhs = den2 + num * num;
        n4 * den2 <= lhs && lhs < 16 * n4 * den2
    }

    /// Degrees belonging to the dyadic block `n`; `None` when it is empty.
    pub fn block_degrees(&self, n: Dyadic) -> Option<RangeInclusive<usize>> {
        // Eigenvalues increase in k, so the block is a contiguous run of degrees.
        let upper = 2 * n.get() as usize + 2;
        let mut first = None;
        let mut last = None;
        for k in 0..=upper {
            if self.in_block(k, n) {
                first.get_or_insert(k);
                last = Some(k);
            } else if first.is_some() {
                break;
            }
        }
        Some(first?..=last?)
    }

    /// Multiplicity of the k-th eigenvalue on 𝕊^d (dimension of the space of
    /// degree-k spherical harmonics). `None` for the synthetic Zoll model.
    pub fn multiplicity(&self, k: usize) -> Option<u128> {
        match *self {
            SpectrumModel::Sphere { dim } => {
                let d = dim as u128;
                let k = k as u128;
                let total = binomial(k + d, d);
                let lower = if k >= 2 { binomial(k + d - 2, d) } else { 0 };
                Some(total - lower)
            }
            SpectrumModel::Zoll { .. } => None,
        }
    }
}

impl fmt::Display for SpectrumModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumModel::Sphere { dim } => write!(f, "sphere(d={dim})"),
            SpectrumModel::Zoll { z0, spread } => write!(f, "zoll(Z0={z0}, E={spread})"),
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A dyadic frequency scale N = 2^j, j ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Dyadic(u64);

impl Dyadic {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Config(format!("dyadic scale must be a power of two >= 1, got {n}")));
        }
        Ok(Dyadic(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// 1, 2, 4, … up to and including `max` (if `max` is itself dyadic).
    pub fn up_to(max: u64) -> impl Iterator<Item = Dyadic> {
        (0..64)
            .map(|j| 1u64 << j)
            .take_while(move |&n| n <= max)
            .map(Dyadic)
    }
}

impl TryFrom<u64> for Dyadic {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        Dyadic::new(n)
    }
}

impl From<Dyadic> for u64 {
    fn from(n: Dyadic) -> u64 {
        n.0
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_zoll_eigenvalues() {
        assert_eq!(SpectrumModel::S2.eigenvalue(1), 2.0);
        assert_eq!(SpectrumModel::sphere(3).unwrap().eigenvalue(0), 0.0);
        assert_eq!(SpectrumModel::zoll(2, 0.5).unwrap().eigenvalue(1), 2.25);
        assert_eq!(SpectrumModel::zoll(0, 0.5).unwrap().eigenvalue(3), 9.0);
    }

    #[test]
    fn eigenvalues_strictly_increase() {
        for model in [
            SpectrumModel::S2,
            SpectrumModel::sphere(5).unwrap(),
            SpectrumModel::zoll(3, 1.0).unwrap(),
        ] {
            for k in 0..500 {
                assert!(model.eigenvalue(k + 1) > model.eigenvalue(k), "{model} at k={k}");
            }
        }
    }

    #[test]
    fn unit_block_on_s2_is_degrees_zero_and_one() {
        // μ = 0, 2, 6: ⟨0⟩ = 1, ⟨2⟩ = √5 < 4, ⟨6⟩ = √37 ≥ 4.
        let one = Dyadic::new(1).unwrap();
        assert_eq!(SpectrumModel::S2.block_degrees(one), Some(0..=1));
    }

    #[test]
    fn blocks_partition_degrees() {
        let model = SpectrumModel::S2;
        let mut owner = vec![0u32; 300];
        for n in Dyadic::up_to(512) {
            if let Some(r) = model.block_degrees(n) {
                for k in r.filter(|&k| k < 300) {
                    owner[k] += 1;
                }
            }
        }
        assert!(owner.iter().all(|&c| c == 1));
    }

    #[test]
    fn block_matches_float_definition() {
        for model in [SpectrumModel::S2, SpectrumModel::zoll(2, 1.0).unwrap()] {
            for n in Dyadic::up_to(64) {
                for k in 0..200 {
                    let f = model.frequency(k);
                    let n = n.get() as f64;
                    let float_view = n <= f && f < 2.0 * n;
                    // Float disagreement is only tolerated right at a boundary.
                    if float_view != model.in_block(k, Dyadic::new(n as u64).unwrap()) {
                        assert!((f - n).abs() < 1e-9 || (f - 2.0 * n).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_multiplicities() {
        let s2 = SpectrumModel::S2;
        for k in 0..20 {
            assert_eq!(s2.multiplicity(k), Some(2 * k as u128 + 1));
        }
        // 𝕊³: (k+1)².
        let s3 = SpectrumModel::sphere(3).unwrap();
        for k in 0..20 {
            assert_eq!(s3.multiplicity(k), Some((k as u128 + 1).pow(2)));
        }
    }

    #[test]
    fn dyadic_validation() {
        assert!(Dyadic::new(0).is_err());
        assert!(Dyadic::new(6).is_err());
        assert_eq!(Dyadic::up_to(64).count(), 7);
    }
}
