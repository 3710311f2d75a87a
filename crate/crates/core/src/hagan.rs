//! Hagan–Kumar–Lesniewski–Woodward implied volatility for β = 1:
//! `σ_H = σ·(z/ξ(z))·[1 + (ρνσ/4 + (2 − 3ρ²)ν²/24)t]`, `z = (ν/σ)y`.
//!
//! `z/ξ(z)` is 0/0 at the money. The regularized quotient blends the direct
//! quotient into its second-order series `1 − ρz/2 + (2 − 3ρ²)z²/12` below
//! [`Z_SWITCH`]; [`Quotient::Raw`] keeps the unregularized expression.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::math::c_rel;
use crate::{Result, SabrParams};

/// Below this |z| the quotient is blended into its Taylor series.
pub const Z_SWITCH: f64 = 1e-4;

/// How `z/ξ(z)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quotient {
    /// Smooth near `z = 0` (limit 1, slope `−ρ/2`).
    #[default]
    Regularized,
    /// Plain `z / ln(...)`: NaN at `z = 0` and noisy just around it.
    Raw,
}

/// `ξ(z) = ln((√(1 − 2ρz + z²) + z − ρ)/(1 − ρ))`.
pub fn xi(z: f64, rho: f64) -> f64 {
    let root = (1.0 - 2.0 * rho * z + z * z).sqrt();
    // √Q − 1 = (z² − 2ρz)/(√Q + 1) avoids cancellation for small z
    let root_minus_one = z * (z - 2.0 * rho) / (root + 1.0);
    ((root_minus_one + z) / (1.0 - rho)).ln_1p()
}

fn z_over_xi_series(z: f64, rho: f64) -> f64 {
    1.0 - 0.5 * rho * z + (2.0 - 3.0 * rho * rho) / 12.0 * z * z
}

/// Regularized `z/ξ(z)`.
pub fn z_over_xi(z: f64, rho: f64) -> f64 {
    let a = z.abs();
    if a >= Z_SWITCH {
        return z / xi(z, rho);
    }
    let series = z_over_xi_series(z, rho);
    let half = 0.5 * Z_SWITCH;
    if a <= half {
        return series;
    }
    // cubic smoothstep from the series (|z| = Z_SWITCH/2) to the quotient (|z| = Z_SWITCH)
    let s = (a - half) / half;
    let w = s * s * (3.0 - 2.0 * s);
    (1.0 - w) * series + w * (z / xi(z, rho))
}

fn z_over_xi_raw(z: f64, rho: f64) -> f64 {
    z / ((((1.0 - 2.0 * rho * z + z * z).sqrt() + z - rho) / (1.0 - rho)).ln())
}

/// Hagan implied volatility (κ₀ = 0).
pub fn sigma_h(y: f64, t: f64, params: &SabrParams, quotient: Quotient) -> Result<f64> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    let (sigma, nu, rho) = (params.sigma0, params.nu, params.rho);
    let z = nu / sigma * y;
    let backbone = match quotient {
        Quotient::Regularized => z_over_xi(z, rho),
        Quotient::Raw => z_over_xi_raw(z, rho),
    };
    let correction = 1.0 + (0.25 * rho * nu * sigma + (2.0 - 3.0 * rho * rho) / 24.0 * nu * nu) * t;
    Ok(sigma * backbone * correction)
}

/// `C_H = C_rel(y, σ_H, t)`.
pub fn price_h(y: f64, t: f64, params: &SabrParams, quotient: Quotient) -> Result<f64> {
    c_rel(y, sigma_h(y, t, params, quotient)?, t)
}
