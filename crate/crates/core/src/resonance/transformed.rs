use serde::{Deserialize, Serialize};

use super::lambda_members;
use crate::error::{Error, Result};
use crate::sigma::SigmaRational;
use crate::spectrum::{Dyadic, SpectrumModel};

/// A member of Λ^{NL}(m) together with the value of the transformed residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: usize,
    pub l: usize,
    pub m: i64,
    /// k̃² − ℓ̃² − (θ−β)(d−1)² − 4βm.
    pub residual: i128,
    /// 2β.
    pub bound: i128,
}

/// Outcome of checking the completed-square form of the window on a set of
/// members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedCheck {
    pub holds: bool,
    pub checked: u64,
    /// First member violating the inequality, if any.
    pub witness: Option<Witness>,
    /// Members outside the degree box N/2 ≤ k ≤ 2N, L/2 ≤ ℓ ≤ 2L (informational:
    /// the unit block contains k = 0).
    pub outside_degree_box: u64,
}

/// For σ = β/θ with β = b², θ = a², on 𝕊^d:
/// k̃ = a(2k+d−1), ℓ̃ = b(2ℓ+d−1) and the window |m − (μ_k/σ − μ_ℓ)| ≤ 1/2
/// becomes |k̃² − ℓ̃² − (θ−β)(d−1)² − 4βm| ≤ 2β. Returns the residual inside
/// the absolute value, or `None` if σ is not a perfect-square pair.
pub fn transformed_residual(k: usize, l: usize, m: i64, sigma: SigmaRational, dim: u32) -> Option<i128> {
    let (b, a) = sigma.square_roots()?;
    let d1 = dim as i128 - 1;
    let kt = a as i128 * (2 * k as i128 + d1);
    let lt = b as i128 * (2 * l as i128 + d1);
    let (beta, theta) = (sigma.beta() as i128, sigma.theta() as i128);
    Some(kt * kt - lt * lt - (theta - beta) * d1 * d1 - 4 * beta * m as i128)
}

/// Check the transformed inequality on explicit (k, ℓ, m) triples.
pub fn verify_members(
    members: &[(usize, usize, i64)],
    sigma: SigmaRational,
    dim: u32,
    box_nl: Option<(Dyadic, Dyadic)>,
) -> Result<TransformedCheck> {
    if !sigma.is_perfect_square_pair() {
        return Err(Error::Precondition(format!("sigma = {sigma} is not a ratio of perfect squares")));
    }
    let bound = 2 * sigma.beta() as i128;
    let mut out = TransformedCheck {
        holds: true,
        checked: 0,
        witness: None,
        outside_degree_box: 0,
    };
    for &(k, l, m) in members {
        let residual = transformed_residual(k, l, m, sigma, dim).expect("checked perfect squares");
        out.checked += 1;
        if residual.abs() > bound && out.witness.is_none() {
            out.holds = false;
            out.witness = Some(Witness { k, l, m, residual, bound });
        }
        if let Some((n, big_l)) = box_nl {
            let inside = |j: usize, s: u64| 2 * j as u64 >= s && j as u64 <= 2 * s;
            if !(inside(k, n.get()) && inside(l, big_l.get())) {
                out.outside_degree_box += 1;
            }
        }
    }
    Ok(out)
}

/// Enumerate Λ^{NL}(m) on 𝕊^d for the given m (all admissible m when `ms` is
/// `None`) and check every member against the transformed inequality.
pub fn verify_transformed_equation(
    n: Dyadic,
    l: Dyadic,
    sigma: SigmaRational,
    dim: u32,
    ms: Option<&[i64]>,
) -> Result<TransformedCheck> {
    if !sigma.is_perfect_square_pair() {
        return Err(Error::Precondition(format!("sigma = {sigma} is not a ratio of perfect squares")));
    }
    let model = SpectrumModel::sphere(dim)?;
    let all: Vec<i64>;
    let ms = match ms {
        Some(ms) => ms,
        None => {
            let t = super::counting_table(n, l, sigma, &model);
            all = t.m_range().filter(|&m| t.count_at(m) > 0).collect();
            &all
        }
    };
    let members: Vec<(usize, usize, i64)> = ms
        .iter()
        .flat_map(|&m| lambda_members(n, l, sigma, &model, m).into_iter().map(move |(k, j)| (k, j, m)))
        .collect();
    verify_members(&members, sigma, dim, Some((n, l)))
}
