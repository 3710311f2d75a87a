//! The Gaussian kernel `φ_t` of the ν = 0 generator and its x-derivatives.
//!
//! With `v = σ√t` and `ℓ(u) = u/v − v/2`,
//! `φ_t(u, σ) = e^{−ℓ(u)²/2}/(v√(2π))` and `∂ᵤⁿφ_t = H̃_n(u)·φ_t` where
//! `H̃_n(u) = (−1/v)ⁿ H_n(ℓ(u))`. At `u = y` (log-moneyness), `ℓ(y) = d₋`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::hermite::{hermite, hermite_all, MAX_HERMITE_ORDER};
use super::normal::norm_pdf;
use crate::error::ensure;
use crate::Result;

fn check(sigma: f64, t: f64) -> Result<()> {
    ensure(sigma > 0.0 && sigma.is_finite(), "sigma", sigma)?;
    ensure(t > 0.0 && t.is_finite(), "t", t)
}

/// `H̃_n(u) = (−1/(σ√t))ⁿ H_n(u/(σ√t) − σ√t/2)`.
pub fn h_tilde(n: usize, u: f64, sigma: f64, t: f64) -> Result<f64> {
    check(sigma, t)?;
    let v = sigma * t.sqrt();
    let h = hermite(n, u / v - 0.5 * v)?;
    Ok((-1.0 / v).powi(n as i32) * h)
}

/// Heat-kernel value `φ_t(u, σ)`.
pub fn phi_t(u: f64, sigma: f64, t: f64) -> Result<f64> {
    check(sigma, t)?;
    let v = sigma * t.sqrt();
    Ok(norm_pdf(u / v - 0.5 * v) / v)
}

/// All `H̃_0 … H̃_5` evaluated at `d₋ = ℓ(u)`, for callers that already
/// validated `v = σ√t > 0`.
pub(crate) fn h_tilde_all(d_minus: f64, v: f64) -> [f64; MAX_HERMITE_ORDER + 1] {
    let mut h = hermite_all(d_minus);
    let mut scale = 1.0;
    for value in h.iter_mut() {
        *value *= scale;
        scale *= -1.0 / v;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn order_zero_is_one() {
        for &u in &[-1.0, 0.0, 0.4] {
            assert_eq!(h_tilde(0, u, 0.3, 2.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn order_one_at_log_moneyness() {
        let (y, sigma, t) = (0.2, 0.25, 1.5);
        let v = sigma * f64::sqrt(t);
        let d_minus = y / v - v / 2.0;
        assert_relative_eq!(h_tilde(1, y, sigma, t).unwrap(), -d_minus / v, max_relative = 1e-14);
    }

    #[test]
    fn order_two_hand_value() {
        assert_relative_eq!(h_tilde(2, 0.0, 0.2, 1.0).unwrap(), -24.75, max_relative = 1e-13);
    }

    #[test]
    fn phi_at_zero() {
        assert_relative_eq!(
            phi_t(0.0, 0.2, 1.0).unwrap(),
            norm_pdf(-0.1) / 0.2,
            max_relative = 1e-15
        );
    }

    #[test]
    fn rejects_degenerate() {
        assert!(phi_t(0.0, 0.0, 1.0).is_err());
        assert!(phi_t(0.0, 0.2, 0.0).is_err());
        assert!(h_tilde(1, 0.0, 0.2, 0.0).is_err());
    }

    #[test]
    fn integrates_to_one() {
        // composite Simpson over ±12 standard deviations
        let (sigma, t) = (0.3, 0.7);
        let v = sigma * f64::sqrt(t);
        let (a, b) = (-0.5 * v * v - 12.0 * v, -0.5 * v * v + 12.0 * v);
        let n = 4000;
        let h = (b - a) / n as f64;
        let mut sum = phi_t(a, sigma, t).unwrap() + phi_t(b, sigma, t).unwrap();
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * phi_t(a + i as f64 * h, sigma, t).unwrap();
        }
        assert_abs_diff_eq!(sum * h / 3.0, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn derivatives_are_hermite_multiples() {
        // ∂ᵤⁿφ = H̃_n φ, checked by recursive central differences of order n−1
        let (sigma, t) = (0.22, 0.9);
        let step = 1e-4;
        for &u in &[-0.3, -0.05, 0.0, 0.12, 0.4] {
            for n in 1..=MAX_HERMITE_ORDER {
                let lower = |x: f64| h_tilde(n - 1, x, sigma, t).unwrap() * phi_t(x, sigma, t).unwrap();
                let fd = (lower(u + step) - lower(u - step)) / (2.0 * step);
                let exact = h_tilde(n, u, sigma, t).unwrap() * phi_t(u, sigma, t).unwrap();
                let scale = exact.abs().max(1.0);
                assert!(((fd - exact) / scale).abs() <= 1e-6, "n={n} u={u}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn batch_matches_single() {
        let (u, sigma, t) = (0.17, 0.31, 0.4);
        let v = sigma * f64::sqrt(t);
        let all = h_tilde_all(u / v - v / 2.0, v);
        for (n, value) in all.iter().enumerate() {
            assert_relative_eq!(*value, h_tilde(n, u, sigma, t).unwrap(), max_relative = 1e-14);
        }
    }
}
