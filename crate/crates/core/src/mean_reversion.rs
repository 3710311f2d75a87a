//! Deterministic mean-reverting volatility (the ν = 0 skeleton of the
//! λSABR dynamics): `dσ/dt = κ(θ − σ)`.
//!
//! The state is parametrized by the forward volatility `z = σ(T)`, so that
//! `σ(z, t) = e^{κ(T−t)}z − θ(e^{κ(T−t)} − 1)` and the aggregated variance
//! `V̄ = ∫_t^T σ(s)² ds` has a closed form.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::ensure;
use crate::math::{norm_cdf, OptionQuery};
use crate::{Error, Result};

/// Below this `κτ` the exponential brackets use their Taylor series.
pub const SERIES_SWITCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanRevState {
    /// Forward volatility `z > 0`.
    pub z: f64,
    pub kappa: f64,
    pub theta: f64,
    /// Horizon `T` in years.
    pub horizon: f64,
    /// Evaluation time `t ≤ T`.
    pub t: f64,
}

impl MeanRevState {
    pub fn new(z: f64, kappa: f64, theta: f64, horizon: f64, t: f64) -> Result<Self> {
        ensure(z > 0.0 && z.is_finite(), "z", z)?;
        ensure(kappa >= 0.0 && kappa.is_finite(), "kappa", kappa)?;
        ensure(theta >= 0.0 && theta.is_finite(), "theta", theta)?;
        ensure(horizon.is_finite(), "horizon", horizon)?;
        ensure(t <= horizon && t.is_finite(), "t", t)?;
        Ok(Self {
            z,
            kappa,
            theta,
            horizon,
            t,
        })
    }

    /// State at `t = 0` whose path starts from the spot volatility `sigma0`.
    pub fn from_spot_vol(sigma0: f64, kappa: f64, theta: f64, horizon: f64) -> Result<Self> {
        ensure(horizon >= 0.0, "horizon", horizon)?;
        let z = theta + (sigma0 - theta) * (-kappa * horizon).exp();
        Self::new(z, kappa, theta, horizon, 0.0)
    }

    /// Remaining time `τ = T − t`.
    pub fn tau(&self) -> f64 {
        self.horizon - self.t
    }
}

/// `σ(z, t) = e^{κτ}z − θ(e^{κτ} − 1)`.
pub fn sigma_of_z(state: &MeanRevState) -> Result<f64> {
    let g = state.kappa * state.tau();
    let s = state.z + (state.z - state.theta) * g.exp_m1();
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::Domain(
            "spot volatility of the mean-reverting path is not positive",
        ))
    }
}

/// `(e^{mκτ} − 1)/(mκ)`, with the series below the switch.
fn growth(kappa: f64, tau: f64, m: f64) -> f64 {
    let g = m * kappa * tau;
    if g.abs() < SERIES_SWITCH {
        tau * (1.0 + g / 2.0 + g * g / 6.0)
    } else {
        g.exp_m1() / (m * kappa)
    }
}

/// Aggregated variance
/// `V̄ = θ²τ + (2/κ)θ(z − θ)(e^{κτ} − 1) + (1/(2κ))(z − θ)²(e^{2κτ} − 1)`.
pub fn total_variance(state: &MeanRevState) -> f64 {
    let tau = state.tau();
    let dev = state.z - state.theta;
    state.theta * state.theta * tau
        + 2.0 * state.theta * dev * growth(state.kappa, tau, 1.0)
        + dev * dev * growth(state.kappa, tau, 2.0)
}

/// Call price under the deterministic path: Black-Scholes with `V̄` in place
/// of `σ²·expiry`.
pub fn det_vol_price(query: &OptionQuery, state: &MeanRevState) -> Result<f64> {
    let var = total_variance(state);
    if !(var > 0.0) {
        return Err(Error::Domain("aggregated variance must be positive"));
    }
    let v = var.sqrt();
    let d_plus = query.log_moneyness() / v + 0.5 * v;
    let forward = query.forward();
    Ok(query.discount() * (forward * norm_cdf(d_plus) - query.strike * norm_cdf(d_plus - v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::bs_call;
    use approx::assert_relative_eq;

    #[test]
    fn sigma_of_z_values() {
        let s = MeanRevState::new(0.25, 0.0, 0.2, 2.0, 0.0).unwrap();
        assert_eq!(sigma_of_z(&s).unwrap(), 0.25);
        let s = MeanRevState::new(0.25, 0.5, 0.2, 2.0, 2.0).unwrap();
        assert_eq!(sigma_of_z(&s).unwrap(), 0.25);
        // e·0.25 − 0.2(e − 1)
        let s = MeanRevState::new(0.25, 0.5, 0.2, 2.0, 0.0).unwrap();
        let e = core::f64::consts::E;
        assert_relative_eq!(
            sigma_of_z(&s).unwrap(),
            e * 0.25 - 0.2 * (e - 1.0),
            max_relative = 1e-14
        );
        let s = MeanRevState::new(0.01, 2.0, 0.5, 3.0, 0.0).unwrap();
        assert!(sigma_of_z(&s).is_err());
    }

    #[test]
    fn from_spot_vol_inverts_sigma_of_z() {
        let s = MeanRevState::from_spot_vol(0.3, 0.7, 0.18, 1.5).unwrap();
        assert_relative_eq!(sigma_of_z(&s).unwrap(), 0.3, max_relative = 1e-14);
    }

    #[test]
    fn variance_limits() {
        let s = MeanRevState::new(0.2, 0.8, 0.2, 1.5, 0.5).unwrap();
        assert_relative_eq!(total_variance(&s), 0.04, max_relative = 1e-14);
        let s = MeanRevState::new(0.3, 0.0, 0.2, 2.0, 0.0).unwrap();
        assert_relative_eq!(total_variance(&s), 0.18, max_relative = 1e-14);
        let s = MeanRevState::new(0.3, 1e-8, 0.2, 1.0, 0.0).unwrap();
        assert_relative_eq!(total_variance(&s), 0.09, max_relative = 1e-7);
    }

    #[test]
    fn variance_seam_is_continuous() {
        let tau = 1.0;
        let below = MeanRevState::new(0.3, SERIES_SWITCH * (1.0 - 1e-9), 0.2, tau, 0.0).unwrap();
        let above = MeanRevState::new(0.3, SERIES_SWITCH * (1.0 + 1e-9), 0.2, tau, 0.0).unwrap();
        assert_relative_eq!(total_variance(&below), total_variance(&above), max_relative = 1e-10);
    }

    #[test]
    fn price_limits() {
        let q = OptionQuery::new(100.0, 95.0, 0.01, 0.75).unwrap();
        let s = MeanRevState::new(0.22, 0.0, 0.1, 0.75, 0.0).unwrap();
        assert_relative_eq!(
            det_vol_price(&q, &s).unwrap(),
            bs_call(&q, 0.22).unwrap(),
            max_relative = 1e-13
        );
        let s = MeanRevState::new(0.15, 1.3, 0.15, 0.75, 0.0).unwrap();
        assert_relative_eq!(
            det_vol_price(&q, &s).unwrap(),
            bs_call(&q, 0.15).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn price_is_monotone_in_variance() {
        let q = OptionQuery::new(1.0, 1.1, 0.0, 1.0).unwrap();
        let mut prev = 0.0;
        for i in 2..20 {
            let s = MeanRevState::new(0.05 * i as f64, 0.5, 0.2, 1.0, 0.0).unwrap();
            assert!(sigma_of_z(&s).is_ok());
            let p = det_vol_price(&q, &s).unwrap();
            assert!(p > prev);
            assert!(p < 1.0);
            prev = p;
        }
    }
}
