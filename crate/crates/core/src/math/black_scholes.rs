#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::normal::norm_cdf;
use crate::error::ensure;
use crate::{Error, Result};

/// A European call contract observed today.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionQuery {
    pub spot: f64,
    pub strike: f64,
    pub rate: f64,
    /// Time to expiry in years.
    pub expiry: f64,
}

impl OptionQuery {
    pub fn new(spot: f64, strike: f64, rate: f64, expiry: f64) -> Result<Self> {
        ensure(spot > 0.0 && spot.is_finite(), "spot", spot)?;
        ensure(strike > 0.0 && strike.is_finite(), "strike", strike)?;
        ensure(rate.is_finite(), "rate", rate)?;
        ensure(expiry >= 0.0 && expiry.is_finite(), "expiry", expiry)?;
        Ok(Self {
            spot,
            strike,
            rate,
            expiry,
        })
    }

    /// Query with `K = 1`, `r = 0` and spot chosen so that the log-moneyness is `y`.
    pub fn from_log_moneyness(y: f64, expiry: f64) -> Result<Self> {
        Self::new(y.exp(), 1.0, 0.0, expiry)
    }

    /// `F = S·e^{rt}`.
    pub fn forward(&self) -> f64 {
        self.spot * (self.rate * self.expiry).exp()
    }

    /// `x = ln(S·e^{rt})`.
    pub fn log_price(&self) -> f64 {
        self.spot.ln() + self.rate * self.expiry
    }

    /// `y = x − ln K`.
    pub fn log_moneyness(&self) -> f64 {
        self.log_price() - self.strike.ln()
    }

    /// Discount factor `e^{−rt}`.
    pub fn discount(&self) -> f64 {
        (-self.rate * self.expiry).exp()
    }

    /// Joint rescaling `(S, K) → (λS, λK)`; leaves `y` unchanged.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            spot: self.spot * lambda,
            strike: self.strike * lambda,
            ..*self
        }
    }

    pub fn with_spot(&self, spot: f64) -> Self {
        Self { spot, ..*self }
    }
}

/// The Black-Scholes arguments `d₊`, `d₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DPair {
    pub d_plus: f64,
    pub d_minus: f64,
}

impl DPair {
    pub(crate) fn from_log_moneyness(y: f64, v: f64) -> Self {
        let d_minus = y / v - 0.5 * v;
        Self {
            d_plus: d_minus + v,
            d_minus,
        }
    }
}

pub(crate) fn check_vol_time(sigma: f64, t: f64) -> Result<()> {
    ensure(sigma > 0.0 && sigma.is_finite(), "sigma", sigma)?;
    ensure(t > 0.0 && t.is_finite(), "t", t)
}

/// `d± = ln(Se^{rt}/K)/(σ√t) ± σ√t/2`. Expiry must be strictly positive.
pub fn d_pair(query: &OptionQuery, sigma: f64) -> Result<DPair> {
    check_vol_time(sigma, query.expiry)?;
    Ok(DPair::from_log_moneyness(
        query.log_moneyness(),
        sigma * query.expiry.sqrt(),
    ))
}

/// Black-Scholes call price `S·N(d₊) − e^{−rt}K·N(d₋)`; the payoff `|S − K|₊` at expiry.
pub fn bs_call(query: &OptionQuery, sigma: f64) -> Result<f64> {
    ensure(sigma >= 0.0 && sigma.is_finite(), "sigma", sigma)?;
    if query.expiry == 0.0 {
        return Ok((query.spot - query.strike).max(0.0));
    }
    if sigma == 0.0 {
        return Ok((query.spot - query.strike * query.discount()).max(0.0));
    }
    let d = d_pair(query, sigma)?;
    Ok(query.spot * norm_cdf(d.d_plus) - query.discount() * query.strike * norm_cdf(d.d_minus))
}

/// Strike-normalized forward price `K⁻¹e^{rt}C_BS = e^y N(d₊) − N(d₋)`.
pub fn c_rel(y: f64, sigma: f64, t: f64) -> Result<f64> {
    ensure(y.is_finite(), "y", y)?;
    ensure(t >= 0.0 && t.is_finite(), "t", t)?;
    if t == 0.0 {
        return Ok((y.exp() - 1.0).max(0.0));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
        });
    }
    let d = DPair::from_log_moneyness(y, sigma * t.sqrt());
    Ok(y.exp() * norm_cdf(d.d_plus) - norm_cdf(d.d_minus))
}

#[cfg(test)]
mod tests {
    use super::super::normal::norm_pdf;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn d_pair_at_the_money() {
        let q = OptionQuery::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let d = d_pair(&q, 0.2).unwrap();
        assert_relative_eq!(d.d_plus, 0.1, max_relative = 1e-15);
        assert_relative_eq!(d.d_minus, -0.1, max_relative = 1e-15);
    }

    #[test]
    fn d_pair_arithmetic() {
        let q = OptionQuery::new(10.0, 8.0, 0.03, 2.0).unwrap();
        let d = d_pair(&q, 0.25).unwrap();
        let v = 0.25 * f64::sqrt(2.0);
        let expected = (10.0 * f64::exp(0.06) / 8.0).ln() / v - v / 2.0;
        assert_relative_eq!(d.d_minus, expected, max_relative = 1e-14);
        assert_relative_eq!(d.d_plus - d.d_minus, v, max_relative = 1e-14);
        let scaled = d_pair(&q.scaled(7.5), 0.25).unwrap();
        assert_relative_eq!(scaled.d_minus, d.d_minus, max_relative = 1e-13);
    }

    #[test]
    fn d_pair_rejects_expiry() {
        let q = OptionQuery::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(d_pair(&q, 0.2).is_err());
    }

    #[test]
    fn bs_call_values() {
        let q = OptionQuery::new(1.0, 1.0, 0.0, 1.0).unwrap();
        // 2N(0.1) − 1, mpmath
        assert_relative_eq!(
            bs_call(&q, 0.2).unwrap(),
            0.079_655_674_554_057_97,
            max_relative = 1e-13
        );
        let expired = OptionQuery::new(1.3, 1.0, 0.05, 0.0).unwrap();
        assert_relative_eq!(bs_call(&expired, 0.2).unwrap(), 0.3, max_relative = 1e-15);
        assert!(bs_call(&q, -0.1).is_err());
    }

    #[test]
    fn forward_identity() {
        let q = OptionQuery::new(12.0, 10.0, 0.04, 1.5).unwrap();
        let sigma = 0.3;
        let d = d_pair(&q, sigma).unwrap();
        let lhs = (q.rate * q.expiry).exp() * bs_call(&q, sigma).unwrap();
        let rhs = q.log_price().exp() * norm_cdf(d.d_plus) - q.strike * norm_cdf(d.d_minus);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn c_rel_matches_bs_call() {
        assert_relative_eq!(
            c_rel(0.0, 0.2, 1.0).unwrap(),
            2.0 * norm_cdf(0.1) - 1.0,
            max_relative = 1e-14
        );
        let q = OptionQuery::new(9.0, 11.0, 0.02, 0.75).unwrap();
        let y = q.log_moneyness();
        let via_bs = bs_call(&q, 0.35).unwrap() * (q.rate * q.expiry).exp() / q.strike;
        assert_relative_eq!(c_rel(y, 0.35, 0.75).unwrap(), via_bs, max_relative = 1e-13);
        assert!(c_rel(-60.0, 0.2, 1.0).unwrap().abs() < 1e-300);
        assert_eq!(c_rel(0.5, 0.2, 0.0).unwrap(), 0.5f64.exp() - 1.0);
    }

    #[test]
    fn forward_and_strike_densities_match() {
        // F·N'(d₊) = K·N'(d₋)
        let q = OptionQuery::new(10.0, 8.5, 0.01, 1.2).unwrap();
        let d = d_pair(&q, 0.27).unwrap();
        assert_relative_eq!(
            q.forward() * norm_pdf(d.d_plus),
            q.strike * norm_pdf(d.d_minus),
            max_relative = 1e-12
        );
    }

    #[test]
    fn vega_finite_difference() {
        // ∂σ(e^{rt}C) = K√t N'(d₋)
        let q = OptionQuery::new(10.0, 11.0, 0.03, 0.8).unwrap();
        let (sigma, h) = (0.24, 1e-5);
        let grow = (q.rate * q.expiry).exp();
        let fd = grow * (bs_call(&q, sigma + h).unwrap() - bs_call(&q, sigma - h).unwrap()) / (2.0 * h);
        let d = d_pair(&q, sigma).unwrap();
        let exact = q.strike * q.expiry.sqrt() * norm_pdf(d.d_minus);
        assert_relative_eq!(fd, exact, max_relative = 1e-6);
    }

    #[test]
    fn monotone_in_sigma_and_spot() {
        let q = OptionQuery::new(10.0, 10.0, 0.01, 1.0).unwrap();
        let mut prev = 0.0;
        for i in 1..100 {
            let p = bs_call(&q, i as f64 * 0.01).unwrap();
            assert!(p > prev);
            prev = p;
        }
        let mut prev = 0.0;
        for i in 1..100 {
            let p = bs_call(&q.with_spot(i as f64 * 0.2), 0.2).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }
}
