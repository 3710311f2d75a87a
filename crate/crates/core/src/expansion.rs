//! Second-order vol-of-vol expansion of the λSABR call price.
//!
//! Forward prices (undiscounted) are expanded as
//! `F_SA,2 = F_BS + νF₁ + ν²F₂`, where each correction is a finite sum
//! `F_j = K Σᵢ a_jᵢ H̃ᵢ(y) φ_t(y, σ)` of Hermite multiples of the ν = 0 heat
//! kernel at the log-moneyness `y`. The implied-volatility expansion
//! `σ_D = σ + νe₁ + ν²e₂` and the delta expansion follow from the same
//! coefficients. Implied vol and delta are only available without mean
//! reversion (κ₀ = 0).

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::math::black_scholes::check_vol_time;
use crate::math::kernel::h_tilde_all;
use crate::math::{c_rel, norm_cdf, norm_pdf, DPair, OptionQuery};
use crate::{Result, SabrParams};

/// Floor applied to `σ_D` when the truncated series goes nonpositive.
pub const SIGMA_D_FLOOR: f64 = 1e-8;

/// Forward price split into its ν-orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionPrice {
    /// `e^{tL₀}h`, the Black-Scholes forward price.
    pub f_bs: f64,
    /// First-order correction (per unit ν).
    pub f1: f64,
    /// Second-order correction (per unit ν²).
    pub f2: f64,
    pub nu: f64,
    /// `f_bs + ν·f1 + ν²·f2`.
    pub total: f64,
}

impl ExpansionPrice {
    fn new(f_bs: f64, f1: f64, f2: f64, nu: f64) -> Self {
        Self {
            f_bs,
            f1,
            f2,
            nu,
            total: f_bs + nu * f1 + nu * nu * f2,
        }
    }

    /// Today's price `e^{−rt}·total`.
    pub fn discounted(&self, query: &OptionQuery) -> f64 {
        query.discount() * self.total
    }
}

/// `(a₁₀, a₁₁)` with `G̃₁ = a₁₀ + a₁₁∂ₓ`.
pub fn f1_coeffs(sigma: f64, t: f64, rho: f64, kappa0: f64, theta: f64) -> Result<[f64; 2]> {
    check_vol_time(sigma, t)?;
    let t2 = t * t;
    Ok([
        0.5 * t2 * sigma * kappa0 * (theta - sigma),
        0.5 * t2 * rho * sigma.powi(3),
    ])
}

/// `(a₂₀, …, a₂₄)` with `G̃₂ = Σᵢ a₂ᵢ∂ₓⁱ`.
pub fn f2_coeffs(sigma: f64, t: f64, rho: f64, kappa0: f64, theta: f64) -> Result<[f64; 5]> {
    check_vol_time(sigma, t)?;
    let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
    let s2 = sigma * sigma;
    let s4 = s2 * s2;
    let s6 = s4 * s2;
    let rho2 = rho * rho;
    let k2 = kappa0 * kappa0;
    let gap = theta - sigma;
    Ok([
        t2 * s2 / 4.0 + t3 * k2 / 6.0 * gap * (theta - 2.0 * sigma),
        -t3 * s4 / 6.0 + t3 * kappa0 * rho * s2 / 6.0 * (4.0 * theta - 5.0 * sigma) - t4 * k2 * s2 / 8.0 * gap * gap,
        t3 * s4 / 6.0 + t3 * rho2 * s4 / 2.0 + t4 * k2 * s2 / 8.0 * gap * gap - t4 * kappa0 * rho * s4 / 4.0 * gap,
        t4 * kappa0 * rho * s4 / 4.0 * gap - t4 * rho2 * s6 / 8.0,
        t4 * rho2 * s6 / 8.0,
    ])
}

/// Kernel data at the log-moneyness: `d±`, `v = σ√t`, `φ_t(y)` and `H̃₀…H̃₅`.
struct KernelAt {
    d: DPair,
    phi: f64,
    h: [f64; 6],
}

impl KernelAt {
    fn new(y: f64, sigma: f64, t: f64) -> Self {
        let v = sigma * t.sqrt();
        let d = DPair::from_log_moneyness(y, v);
        Self {
            d,
            phi: norm_pdf(d.d_minus) / v,
            h: h_tilde_all(d.d_minus, v),
        }
    }

    /// `Σᵢ aᵢ H̃_{i+shift} φ_t`; `shift = 1` applies one x-derivative.
    fn apply(&self, coeffs: &[f64], shift: usize) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * self.h[i + shift])
            .sum::<f64>()
            * self.phi
    }
}

/// First-order correction `F₁ = (Kt/2)(κ₀(θ − σ)√t − ρσd₋)N'(d₋)`.
pub fn f1_term(query: &OptionQuery, sigma: f64, rho: f64, kappa0: f64, theta: f64) -> Result<f64> {
    let t = query.expiry;
    check_vol_time(sigma, t)?;
    let d = DPair::from_log_moneyness(query.log_moneyness(), sigma * t.sqrt());
    Ok(0.5 * query.strike * t * (kappa0 * (theta - sigma) * t.sqrt() - rho * sigma * d.d_minus) * norm_pdf(d.d_minus))
}

/// Second-order correction `F₂ = K Σᵢ a₂ᵢ H̃ᵢ(y) φ_t(y, σ)`.
pub fn f2_term(query: &OptionQuery, sigma: f64, rho: f64, kappa0: f64, theta: f64) -> Result<f64> {
    let t = query.expiry;
    let a = f2_coeffs(sigma, t, rho, kappa0, theta)?;
    Ok(query.strike * KernelAt::new(query.log_moneyness(), sigma, t).apply(&a, 0))
}

/// Second-order forward price `F_SA,2`. At expiry the payoff is returned.
pub fn price_sa2(query: &OptionQuery, params: &SabrParams) -> Result<ExpansionPrice> {
    params.validate()?;
    let t = query.expiry;
    if t == 0.0 {
        let payoff = (query.spot - query.strike).max(0.0);
        return Ok(ExpansionPrice::new(payoff, 0.0, 0.0, params.nu));
    }
    let sigma = params.sigma0;
    let y = query.log_moneyness();
    let f_bs = query.strike * c_rel(y, sigma, t)?;
    let f1 = f1_term(query, sigma, params.rho, params.kappa0, params.theta)?;
    let f2 = f2_term(query, sigma, params.rho, params.kappa0, params.theta)?;
    Ok(ExpansionPrice::new(f_bs, f1, f2, params.nu))
}

/// `F_SA,2` for `K = 1`, `r = 0` as a function of the log-moneyness.
pub fn relative_price_sa2(y: f64, t: f64, params: &SabrParams) -> Result<f64> {
    Ok(price_sa2(&OptionQuery::from_log_moneyness(y, t)?, params)?.total)
}

/// First-order implied-vol coefficient `e₁ = −ρσ√t·d₋/2` (κ₀ = 0).
pub fn implied_e1(y: f64, sigma: f64, rho: f64, t: f64) -> Result<f64> {
    check_vol_time(sigma, t)?;
    let v = sigma * t.sqrt();
    Ok(-0.5 * rho * v * DPair::from_log_moneyness(y, v).d_minus)
}

/// Second-order implied-vol coefficient (κ₀ = 0):
/// `σt/12 − ρ²tσ/8 − σ³t²/24 − ρ²tσy/8 + y²/(6σ) − ρ²y²/(4σ) + t²ρ²σ³/8`.
pub fn implied_e2(y: f64, sigma: f64, rho: f64, t: f64) -> Result<f64> {
    check_vol_time(sigma, t)?;
    let rho2 = rho * rho;
    let s3 = sigma * sigma * sigma;
    let y2 = y * y;
    Ok(
        sigma * t / 12.0 - rho2 * t * sigma / 8.0 - s3 * t * t / 24.0 - rho2 * t * sigma * y / 8.0 + y2 / (6.0 * sigma)
            - rho2 * y2 / (4.0 * sigma)
            + t * t * rho2 * s3 / 8.0,
    )
}

/// Second-order implied volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaD {
    /// `max(raw, SIGMA_D_FLOOR)`.
    pub value: f64,
    /// `σ + νe₁ + ν²e₂` before flooring.
    pub raw: f64,
    pub clamped: bool,
}

/// `σ_D = σ + νe₁ + ν²e₂`, floored at [`SIGMA_D_FLOOR`].
pub fn sigma_d(y: f64, t: f64, params: &SabrParams) -> Result<SigmaD> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    let (sigma, nu, rho) = (params.sigma0, params.nu, params.rho);
    let raw = if nu == 0.0 {
        sigma
    } else {
        sigma + nu * implied_e1(y, sigma, rho, t)? + nu * nu * implied_e2(y, sigma, rho, t)?
    };
    let clamped = !(raw > 0.0);
    Ok(SigmaD {
        value: if clamped { SIGMA_D_FLOOR } else { raw },
        raw,
        clamped,
    })
}

/// `C_D = C_rel(y, σ_D, t)`.
pub fn price_d(y: f64, t: f64, params: &SabrParams) -> Result<f64> {
    c_rel(y, sigma_d(y, t, params)?.value, t)
}

/// Second-order delta `∂_S C_SA,2 = N(d₊) + e^{−x}(ν∂ₓF₁ + ν²∂ₓF₂)` (κ₀ = 0),
/// obtained by differentiating each Hermite term of the price expansion.
pub fn delta_sa2(query: &OptionQuery, params: &SabrParams) -> Result<f64> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    let (sigma, t) = (params.sigma0, query.expiry);
    check_vol_time(sigma, t)?;
    let kernel = KernelAt::new(query.log_moneyness(), sigma, t);
    let a1 = f1_coeffs(sigma, t, params.rho, 0.0, 0.0)?;
    let a2 = f2_coeffs(sigma, t, params.rho, 0.0, 0.0)?;
    let nu = params.nu;
    let correction = query.strike * (nu * kernel.apply(&a1, 1) + nu * nu * kernel.apply(&a2, 1));
    Ok(norm_cdf(kernel.d.d_plus) + (-query.log_price()).exp() * correction)
}
