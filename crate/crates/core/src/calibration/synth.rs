//! Synthetic quote panels shaped like a listed index-option surface:
//! 10 expiries × 13 deltas × {call, put} = 260 quotes per day.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{delta_to_moneyness, FitParams, MarketQuote, Moneyness, Objective, OptionType, QuoteDay};
use crate::error::ensure;
use crate::Result;

pub const PANEL_EXPIRY_MONTHS: [u32; 10] = [1, 2, 3, 4, 5, 6, 9, 12, 18, 24];
pub const PANEL_DELTAS: [f64; 13] = [0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8];

/// Smallest volatility a noisy quote is allowed to take.
const VOL_FLOOR: f64 = 1e-3;

/// `n_days` delta-quoted days with `Σ = model_vol(y) + noise·Z`, where the
/// model is `generator`'s volatility model and `y` is computed from the
/// generator σ. Deterministic per seed.
pub fn synth_panel(
    params: FitParams,
    generator: &Objective,
    n_days: usize,
    noise: f64,
    seed: u64,
) -> Result<Vec<QuoteDay>> {
    ensure(noise >= 0.0 && noise.is_finite(), "noise", noise)?;
    ensure(params.in_bounds(), "generator", params.nu)?;
    let mut days = Vec::with_capacity(n_days);
    for day in 0..n_days {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(day as u64);
        let mut quotes = Vec::with_capacity(260);
        for option_type in [OptionType::Call, OptionType::Put] {
            for &months in &PANEL_EXPIRY_MONTHS {
                let t = months as f64 / 12.0;
                for &delta in &PANEL_DELTAS {
                    let y = delta_to_moneyness(delta, params.sigma, t)?;
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let vol = generator.model_vol(y, t, params)? + noise * z;
                    quotes.push(MarketQuote {
                        option_type,
                        expiry: t,
                        moneyness: Moneyness::Delta(delta),
                        implied_vol: vol.max(VOL_FLOOR),
                    });
                }
            }
        }
        days.push(QuoteDay { day, quotes });
    }
    Ok(days)
}

#[cfg(test)]
mod tests {
    use super::super::{fit_day, objective_value, FitOptions};
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let p = FitParams::new(1.3, 0.19, -0.55);
        let o = Objective::default();
        let a = synth_panel(p, &o, 3, 0.01, 9).unwrap();
        let b = synth_panel(p, &o, 3, 0.01, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|d| d.quotes.len() == 260));
        assert_ne!(a[0].quotes[0].implied_vol, a[1].quotes[0].implied_vol);
        let c = synth_panel(p, &o, 1, 0.01, 10).unwrap();
        assert_ne!(a[0], c[0]);
    }

    #[test]
    fn zero_noise_day_is_exact_at_generator() {
        let p = FitParams::new(1.3, 0.19, -0.55);
        let o = Objective::default();
        let day = &synth_panel(p, &o, 1, 0.0, 1).unwrap()[0];
        let v = objective_value(day, p, &o, p.sigma);
        assert_eq!(v.mean_square, 0.0);
        assert_eq!(v.used, 260);
    }

    #[test]
    fn zero_noise_fit_recovers_generator() {
        let p = FitParams::new(0.8, 0.22, -0.4);
        let o = Objective::default();
        let day = &synth_panel(p, &o, 1, 0.0, 1).unwrap()[0];
        let fit = fit_day(day, FitParams::new(0.5, 0.2, 0.0), &o, p.sigma, &FitOptions::default()).unwrap();
        assert!((fit.params.nu - p.nu).abs() < 1e-4, "{fit:?}");
        assert!((fit.params.sigma - p.sigma).abs() < 1e-4, "{fit:?}");
        assert!((fit.params.rho - p.rho).abs() < 1e-4, "{fit:?}");
    }
}
