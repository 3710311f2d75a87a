use crate::error::ensure;
use crate::{Error, Result};

/// λSABR model parameters.
///
/// The pricing PDE is
/// `∂_τu = σ²[½(∂²ₓu − ∂ₓu) + νρ∂ₓ∂_σu + ½ν²∂²_σu] + κ(θ − σ)∂_σu`
/// with the mean-reversion speed scaled as `κ = ν·κ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SabrParams {
    /// Initial volatility σ₀ > 0.
    pub sigma0: f64,
    /// Volatility of volatility ν ≥ 0.
    pub nu: f64,
    /// Correlation between the forward and volatility drivers, |ρ| < 1.
    pub rho: f64,
    /// Mean-reversion speed per unit ν (κ = ν·κ₀), κ₀ ≥ 0.
    pub kappa0: f64,
    /// Long-run volatility level θ ≥ 0.
    pub theta: f64,
}

impl SabrParams {
    pub fn new(sigma0: f64, nu: f64, rho: f64, kappa0: f64, theta: f64) -> Result<Self> {
        let params = Self {
            sigma0,
            nu,
            rho,
            kappa0,
            theta,
        };
        params.validate()?;
        Ok(params)
    }

    /// Plain SABR (no mean reversion).
    pub fn sabr(sigma0: f64, nu: f64, rho: f64) -> Result<Self> {
        Self::new(sigma0, nu, rho, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.sigma0 > 0.0 && self.sigma0.is_finite(), "sigma0", self.sigma0)?;
        ensure(self.nu >= 0.0 && self.nu.is_finite(), "nu", self.nu)?;
        ensure(self.rho.abs() < 1.0, "rho", self.rho)?;
        ensure(self.kappa0 >= 0.0 && self.kappa0.is_finite(), "kappa0", self.kappa0)?;
        ensure(self.theta >= 0.0 && self.theta.is_finite(), "theta", self.theta)
    }

    /// κ = ν·κ₀.
    pub fn kappa(&self) -> f64 {
        self.nu * self.kappa0
    }

    pub fn with_nu(self, nu: f64) -> Self {
        Self { nu, ..self }
    }

    pub fn with_sigma0(self, sigma0: f64) -> Self {
        Self { sigma0, ..self }
    }

    pub(crate) fn require_no_mean_reversion(&self) -> Result<()> {
        if self.kappa0 == 0.0 {
            Ok(())
        } else {
            Err(Error::MeanReversionUnsupported(self.kappa0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SabrParams::sabr(0.2, 0.5, -0.3).is_ok());
        assert!(SabrParams::sabr(0.0, 0.5, -0.3).is_err());
        assert!(SabrParams::sabr(0.2, -0.1, -0.3).is_err());
        assert!(SabrParams::sabr(0.2, 0.5, 1.0).is_err());
        assert!(SabrParams::sabr(0.2, 0.5, f64::NAN).is_err());
        assert!(SabrParams::new(0.2, 0.5, 0.0, -1.0, 0.2).is_err());
        assert!(SabrParams::new(0.2, 0.5, 0.0, 0.25, -0.2).is_err());
        assert_eq!(SabrParams::new(0.2, 0.4, 0.0, 0.25, 0.2).unwrap().kappa(), 0.1);
    }
}
