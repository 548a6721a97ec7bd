//! Exact integer counting of the resonance sets
//!
//! ```text
//! Λ^{NL}(m) = {(k, ℓ) ∈ ℕ² : |m − (μ_k/σ − μ_ℓ)| ≤ 1/2,
//!              N ≤ ⟨μ_k⟩^{1/2} < 2N,  L ≤ ⟨μ_ℓ⟩^{1/2} < 2L}
//! ```
//!
//! plus the divisor machinery that bounds them, Zoll clusters and Weyl counts.
//! With σ = β/θ and μ = num/den, the window is cleared to the integer test
//! |2β·den·m − 2θ·num_k + 2β·num_ℓ| ≤ β·den; no floating point is involved.

mod divisor;
mod transformed;
mod zoll;

pub use divisor::{divisor_count, ntlemma_count};
pub use transformed::{transformed_residual, verify_members, verify_transformed_equation, TransformedCheck, Witness};
pub use zoll::{weyl_count, weyl_ratio, zoll_k0, zoll_spectrum, ZollCluster};

use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

use crate::sigma::SigmaRational;
use crate::spectrum::{Dyadic, SpectrumModel};

/// Per-m cardinalities of Λ^{NL}(m) for one (N, L) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingResult {
    pub n: Dyadic,
    pub l: Dyadic,
    pub model: SpectrumModel,
    pub sigma: SigmaRational,
    /// m corresponding to `counts[0]`.
    pub m_min: i64,
    pub counts: Vec<u64>,
    /// max_m ♯Λ(m); 0 when both blocks are empty.
    pub sup: u64,
    /// Smallest maximizing m (0 when nothing is counted).
    pub argmax: i64,
    /// Number of (k, ℓ) pairs in the two blocks.
    pub pairs: u64,
}

impl CountingResult {
    pub fn count_at(&self, m: i64) -> u64 {
        let i = m - self.m_min;
        if i < 0 {
            return 0;
        }
        self.counts.get(i as usize).copied().unwrap_or(0)
    }

    /// m values carrying a stored count (possibly zero).
    pub fn m_range(&self) -> RangeInclusive<i64> {
        self.m_min..=self.m_min + self.counts.len() as i64 - 1
    }

    /// Σ_m ♯Λ(m): each pair is counted once or twice (twice when μ_k/σ − μ_ℓ
    /// is a half-integer).
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The integer interval outside of which Λ^{NL}(m) is empty:
/// [−4L² − 1, ⌊4N²/σ⌋ + 1].
pub fn admissible_range(n: Dyadic, l: Dyadic, sigma: SigmaRational) -> RangeInclusive<i64> {
    let n2 = (n.get() as i128).pow(2);
    let l2 = (l.get() as i128).pow(2);
    let upper = (4 * n2 * sigma.theta() as i128).div_euclid(sigma.beta() as i128) + 1;
    (-4 * l2 - 1) as i64..=upper as i64
}

/// Quantities entering the cleared window test for the pair (k, ℓ):
/// μ_k/σ − μ_ℓ = p/q with q = β·den > 0.
fn ratio(k: usize, l: usize, sigma: SigmaRational, model: &SpectrumModel) -> (i128, i128) {
    let a = model.exact_eigenvalue(k);
    let b = model.exact_eigenvalue(l);
    debug_assert_eq!(a.den, b.den);
    let beta = sigma.beta() as i128;
    let theta = sigma.theta() as i128;
    (theta * a.num as i128 - beta * b.num as i128, beta * a.den as i128)
}

/// |m − p/q| ≤ 1/2 ⟺ |2qm − 2p| ≤ q.
fn in_window(m: i64, p: i128, q: i128) -> bool {
    (2 * q * m as i128 - 2 * p).abs() <= q
}

/// The m with |m − p/q| ≤ 1/2: ⌈(2p − q)/2q⌉ ..= ⌊(2p + q)/2q⌋.
fn window_ms(p: i128, q: i128) -> RangeInclusive<i64> {
    let lo = -(-(2 * p - q)).div_euclid(2 * q);
    let hi = (2 * p + q).div_euclid(2 * q);
    lo as i64..=hi as i64
}

fn blocks(n: Dyadic, l: Dyadic, model: &SpectrumModel) -> Option<(RangeInclusive<usize>, RangeInclusive<usize>)> {
    Some((model.block_degrees(n)?, model.block_degrees(l)?))
}

/// ♯Λ^{NL}(m).
pub fn count_lambda(n: Dyadic, l: Dyadic, sigma: SigmaRational, model: &SpectrumModel, m: i64) -> u64 {
    lambda_members(n, l, sigma, model, m).len() as u64
}

/// The members (k, ℓ) of Λ^{NL}(m), k-major.
pub fn lambda_members(n: Dyadic, l: Dyadic, sigma: SigmaRational, model: &SpectrumModel, m: i64) -> Vec<(usize, usize)> {
    let Some((ks, ls)) = blocks(n, l, model) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for k in ks {
        for j in ls.clone() {
            let (p, q) = ratio(k, j, sigma, model);
            if in_window(m, p, q) {
                out.push((k, j));
            }
        }
    }
    out
}

/// All per-m counts of one cell, built from a single pass over the pairs.
pub fn counting_table(n: Dyadic, l: Dyadic, sigma: SigmaRational, model: &SpectrumModel) -> CountingResult {
    let empty = CountingResult {
        n,
        l,
        model: *model,
        sigma,
        m_min: 0,
        counts: Vec::new(),
        sup: 0,
        argmax: 0,
        pairs: 0,
    };
    let Some((ks, ls)) = blocks(n, l, model) else {
        return empty;
    };
    let windows: Vec<RangeInclusive<i64>> = ks
        .flat_map(|k| ls.clone().map(move |j| (k, j)))
        .map(|(k, j)| {
            let (p, q) = ratio(k, j, sigma, model);
            window_ms(p, q)
        })
        .collect();
    let lo = windows.iter().map(|r| *r.start()).min().unwrap_or(0);
    let hi = windows.iter().map(|r| *r.end()).max().unwrap_or(-1);
    let mut counts = vec![0u64; (hi - lo + 1).max(0) as usize];
    for w in &windows {
        for m in w.clone() {
            counts[(m - lo) as usize] += 1;
        }
    }
    let mut sup = 0;
    let mut argmax = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > sup {
            sup = c;
            argmax = lo + i as i64;
        }
    }
    CountingResult {
        m_min: lo,
        counts,
        sup,
        argmax,
        pairs: windows.len() as u64,
        ..empty
    }
}

/// (m*, sup_m ♯Λ^{NL}(m)), ties broken towards the smallest m.
pub fn sup_count(n: Dyadic, l: Dyadic, sigma: SigmaRational, model: &SpectrumModel) -> (i64, u64) {
    let t = counting_table(n, l, sigma, model);
    (t.argmax, t.sup)
}

#[cfg(test)]
mod tests;
