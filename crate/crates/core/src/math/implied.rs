#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::black_scholes::c_rel;
use super::normal::norm_pdf;
use crate::error::ensure;
use crate::{Error, Result};

/// Search interval for the implied volatility.
pub const IMPLIED_VOL_BRACKET: (f64, f64) = (1e-6, 5.0);

const PRICE_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// Implied volatility of a strike-normalized forward call price (see
/// [`c_rel`](super::c_rel)), by Newton steps safeguarded with bisection on
/// [`IMPLIED_VOL_BRACKET`].
///
/// The price must lie strictly inside the no-arbitrage band
/// `(|e^y − 1|₊, e^y)`; prices whose root falls outside the bracket are
/// reported as domain errors as well.
pub fn bs_implied_vol(price: f64, y: f64, t: f64) -> Result<f64> {
    ensure(price.is_finite(), "price", price)?;
    ensure(y.is_finite(), "y", y)?;
    ensure(t > 0.0 && t.is_finite(), "t", t)?;
    let upper = y.exp();
    let intrinsic = (upper - 1.0).max(0.0);
    if price <= intrinsic || price >= upper {
        return Err(Error::Domain("price outside the no-arbitrage band"));
    }

    let (mut lo, mut hi) = IMPLIED_VOL_BRACKET;
    let f_lo = c_rel(y, lo, t)? - price;
    let f_hi = c_rel(y, hi, t)? - price;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Domain("implied volatility outside the search bracket"));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    let sqrt_t = t.sqrt();
    // start from the inflection point of c_rel in σ, where Newton is globally monotone
    let mut sigma = ((2.0 * y.abs()) / t).sqrt().clamp(0.05, hi).max(lo);
    for _ in 0..MAX_ITER {
        let diff = c_rel(y, sigma, t)? - price;
        if diff.abs() <= PRICE_TOL {
            return Ok(sigma);
        }
        if diff > 0.0 {
            hi = sigma;
        } else {
            lo = sigma;
        }
        let v = sigma * sqrt_t;
        let vega = sqrt_t * norm_pdf(y / v - 0.5 * v);
        let newton = sigma - diff / vega;
        sigma = if vega > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(sigma);
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn round_trip_at_the_money() {
        let price = c_rel(0.0, 0.2, 1.0).unwrap();
        assert_abs_diff_eq!(bs_implied_vol(price, 0.0, 1.0).unwrap(), 0.2, epsilon = 1e-10);
    }

    #[test]
    fn round_trip_off_the_money() {
        let price = c_rel(0.3, 0.35, 0.5).unwrap();
        assert_abs_diff_eq!(bs_implied_vol(price, 0.3, 0.5).unwrap(), 0.35, epsilon = 1e-10);
    }

    #[test]
    fn band_edges_are_domain_errors() {
        let y: f64 = 0.1;
        assert!(matches!(bs_implied_vol(y.exp() - 1.0, y, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bs_implied_vol(y.exp(), y, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bs_implied_vol(-0.01, -0.2, 1.0), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(y in -0.8f64..0.8, sigma in 0.05f64..1.5, t in 0.05f64..5.0) {
            let price = c_rel(y, sigma, t).unwrap();
            // skip prices indistinguishable from the band edges in double precision
            prop_assume!(price - (y.exp() - 1.0).max(0.0) > 1e-9 && y.exp() - price > 1e-9);
            let implied = bs_implied_vol(price, y, t).unwrap();
            prop_assert!((c_rel(y, implied, t).unwrap() - price).abs() <= 1e-12);
            let vega = t.sqrt() * norm_pdf(y / (sigma * t.sqrt()) - 0.5 * sigma * t.sqrt());
            prop_assume!(vega > 1e-3);
            prop_assert!((implied - sigma).abs() <= 1e-8);
        }
    }
}
