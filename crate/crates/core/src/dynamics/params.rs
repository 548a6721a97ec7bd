use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigma::SigmaRational;

/// Sign in front of a Laplacian: the (±,±) choice of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Physical parameters of
///
/// ```text
/// i v_t + s_v Δv − v         = ε₁ u v̄
/// i u_t + s_u Δu/σ − αu/σ    = ε₂ v² / (2σ)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub sigma: SigmaRational,
    pub alpha: f64,
    pub eps1: Complex64,
    pub eps2: Complex64,
    /// Dispersion signs (s_v, s_u).
    #[serde(default)]
    pub signs: (Sign, Sign),
}

impl EvolutionParams {
    pub fn new(sigma: SigmaRational, alpha: f64, eps1: Complex64, eps2: Complex64) -> Result<Self> {
        let p = Self {
            sigma,
            alpha,
            eps1,
            eps2,
            signs: (Sign::Plus, Sign::Plus),
        };
        p.validate()?;
        Ok(p)
    }

    /// Real couplings ε₁ = ε₂ = `eps`.
    pub fn real(sigma: SigmaRational, alpha: f64, eps: f64) -> Result<Self> {
        Self::new(sigma, alpha, Complex64::new(eps, 0.0), Complex64::new(eps, 0.0))
    }

    pub fn with_signs(mut self, v: Sign, u: Sign) -> Self {
        self.signs = (v, u);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !self.alpha.is_finite() || !finite(self.eps1) || !finite(self.eps2) {
            return Err(Error::Config("alpha and couplings must be finite".into()));
        }
        Ok(())
    }

    pub fn sigma_value(&self) -> f64 {
        self.sigma.value()
    }

    /// V(t) = e^{it(s_v Δ − 1)}.
    pub fn group_v(&self) -> GroupSpec {
        GroupSpec {
            delta: self.signs.0.value(),
            gamma: 1.0,
        }
    }

    /// U_σ(t) = e^{it(s_u Δ/σ − α/σ)}.
    pub fn group_u(&self) -> GroupSpec {
        let s = self.sigma_value();
        GroupSpec {
            delta: self.signs.1.value() / s,
            gamma: self.alpha / s,
        }
    }

    /// ε₁ = conj(ε₂): the nonlinearity preserves ∫|v|² + 2σ|u|².
    pub fn is_mass_conserving(&self) -> bool {
        self.eps1 == self.eps2.conj()
    }

    /// Real, equal couplings with (+,+) signs: both mass and energy are conserved.
    pub fn is_conservative(&self) -> bool {
        self.is_mass_conserving() && self.eps1.im == 0.0 && self.signs == (Sign::Plus, Sign::Plus)
    }

    pub fn is_linear(&self) -> bool {
        self.eps1 == Complex64::new(0.0, 0.0) && self.eps2 == Complex64::new(0.0, 0.0)
    }
}

/// Symbol of a linear group e^{it(δΔ − γ)}: the degree-k phase is
/// exp(it(−δμ_k − γ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub delta: f64,
    pub gamma: f64,
}

impl GroupSpec {
    /// V(t) = e^{it(Δ−1)}.
    pub const V: GroupSpec = GroupSpec { delta: 1.0, gamma: 1.0 };

    /// U_σ(t) = e^{it(Δ/σ − α/σ)}.
    pub fn u_sigma(sigma: f64, alpha: f64) -> GroupSpec {
        GroupSpec {
            delta: 1.0 / sigma,
            gamma: alpha / sigma,
        }
    }

    /// Angular frequency of degree-k coefficients.
    pub fn frequency(&self, mu: f64) -> f64 {
        -self.delta * mu - self.gamma
    }

    pub fn phase(&self, mu: f64, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, t * self.frequency(mu))
    }
}
