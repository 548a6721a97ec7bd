use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Dispersion ratio σ = β/θ kept as the literal integer pair.
///
/// No reduction to lowest terms happens: the transformed resonance equation
/// uses β and θ as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaRational {
    beta: u64,
    theta: u64,
}

impl SigmaRational {
    pub fn new(beta: u64, theta: u64) -> Result<Self> {
        if beta == 0 || theta == 0 {
            return Err(Error::Config(format!(
                "sigma = beta/theta needs positive integers, got {beta}/{theta}"
            )));
        }
        Ok(Self { beta, theta })
    }

    /// σ = 1.
    pub const ONE: Self = Self { beta: 1, theta: 1 };

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    pub fn value(&self) -> f64 {
        self.beta as f64 / self.theta as f64
    }

    /// Both β and θ are perfect squares.
    pub fn is_perfect_square_pair(&self) -> bool {
        isqrt_exact(self.beta).is_some() && isqrt_exact(self.theta).is_some()
    }

    /// (√β, √θ) when both are perfect squares.
    pub fn square_roots(&self) -> Option<(u64, u64)> {
        Some((isqrt_exact(self.beta)?, isqrt_exact(self.theta)?))
    }
}

impl fmt::Display for SigmaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.beta, self.theta)
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn isqrt_exact(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}
