//! Daily least-squares fits of `(ν, σ, ρ)` to implied-volatility quotes.
//!
//! Quotes carry either a delta or a log-moneyness. Deltas are mapped to
//! `y = (σ_prev√T/2)(2N⁻¹(Δ) − σ_prev√T)` with the previous day's fitted σ,
//! so a panel is fitted as a warm-start chain. Errors are averaged norms:
//! the objective is a mean square and ISE/OSE are its square root.

mod nelder_mead;
mod synth;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};
pub use synth::{synth_panel, PANEL_DELTAS, PANEL_EXPIRY_MONTHS};

use crate::error::ensure;
use crate::expansion::{relative_price_sa2, sigma_d};
use crate::hagan::{sigma_h, Quotient};
use crate::math::{bs_implied_vol, c_rel, norm_inv_cdf};
use crate::{norms, Error, Result, SabrParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionType {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moneyness {
    Delta(f64),
    LogMoneyness(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketQuote {
    pub option_type: OptionType,
    /// Years to expiry.
    pub expiry: f64,
    pub moneyness: Moneyness,
    pub implied_vol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuoteDay {
    pub day: usize,
    pub quotes: Vec<MarketQuote>,
}

/// Fitted parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitParams {
    pub nu: f64,
    pub sigma: f64,
    pub rho: f64,
}

impl FitParams {
    pub const LOWER: [f64; 3] = [0.0, 0.01, -0.99];
    pub const UPPER: [f64; 3] = [5.0, 2.0, 0.99];

    pub fn new(nu: f64, sigma: f64, rho: f64) -> Self {
        Self { nu, sigma, rho }
    }

    fn to_array(self) -> [f64; 3] {
        [self.nu, self.sigma, self.rho]
    }

    fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn in_bounds(&self) -> bool {
        self.to_array()
            .iter()
            .zip(Self::LOWER.iter().zip(&Self::UPPER))
            .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }
}

/// Compared quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Vol,
    Price,
    LogPrice,
}

/// Model behind the compared quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `σ_D = σ + νe₁ + ν²e₂`.
    D,
    /// Hagan with the regularized quotient.
    H,
    /// Hagan with the raw quotient.
    HRaw,
    /// Second-order price expansion.
    Sa2,
    /// Second-order price expansion with mean reversion.
    Kappa,
    /// Flat volatility σ.
    Bs,
}

/// An objective such as `sigma_d`, `price_h` or `log_price_sa2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub target: Target,
    pub model: Model,
    /// κ₀ and θ for [`Model::Kappa`].
    pub kappa0: f64,
    pub theta: f64,
}

impl Objective {
    pub const DEFAULT_KAPPA0: f64 = 0.25;
    pub const DEFAULT_THETA: f64 = 0.18;

    pub fn new(target: Target, model: Model) -> Self {
        Self {
            target,
            model,
            kappa0: Self::DEFAULT_KAPPA0,
            theta: Self::DEFAULT_THETA,
        }
    }

    fn params(&self, p: FitParams) -> Result<SabrParams> {
        match self.model {
            Model::Kappa => SabrParams::new(p.sigma, p.nu, p.rho, self.kappa0, self.theta),
            _ => SabrParams::sabr(p.sigma, p.nu, p.rho),
        }
    }

    /// Model implied volatility at `(y, t)`.
    pub fn model_vol(&self, y: f64, t: f64, p: FitParams) -> Result<f64> {
        let params = self.params(p)?;
        match self.model {
            Model::D => Ok(sigma_d(y, t, &params)?.value),
            Model::H => sigma_h(y, t, &params, Quotient::Regularized),
            Model::HRaw => sigma_h(y, t, &params, Quotient::Raw),
            Model::Bs => Ok(p.sigma),
            Model::Sa2 | Model::Kappa => bs_implied_vol(relative_price_sa2(y, t, &params)?, y, t),
        }
    }

    /// Model relative price `C_rel` at `(y, t)`.
    pub fn model_price(&self, y: f64, t: f64, p: FitParams) -> Result<f64> {
        match self.model {
            Model::Sa2 | Model::Kappa => relative_price_sa2(y, t, &self.params(p)?),
            _ => c_rel(y, self.model_vol(y, t, p)?, t),
        }
    }

    /// Signed discrepancy model − market for one resolved quote.
    pub fn residual(&self, y: f64, t: f64, market_vol: f64, p: FitParams) -> Result<f64> {
        let r = match self.target {
            Target::Vol => self.model_vol(y, t, p)? - market_vol,
            Target::Price => self.model_price(y, t, p)? - c_rel(y, market_vol, t)?,
            Target::LogPrice => {
                let (m, q) = (self.model_price(y, t, p)?, c_rel(y, market_vol, t)?);
                if !(m > 0.0 && q > 0.0) {
                    return Err(Error::Domain("log objective needs positive prices"));
                }
                m.ln() - q.ln()
            }
        };
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::Domain("non-finite model value"))
        }
    }
}

impl Default for Objective {
    fn default() -> Self {
        Self::new(Target::Vol, Model::D)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let target = match self.target {
            Target::Vol => "sigma",
            Target::Price => "price",
            Target::LogPrice => "log_price",
        };
        let model = match self.model {
            Model::D => "d",
            Model::H => "h",
            Model::HRaw => "h_raw",
            Model::Sa2 => "sa2",
            Model::Kappa => "kappa",
            Model::Bs => "bs",
        };
        write!(f, "{target}_{model}")
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (target, rest) = if let Some(r) = s.strip_prefix("log_price_") {
            (Target::LogPrice, r)
        } else if let Some(r) = s.strip_prefix("price_") {
            (Target::Price, r)
        } else if let Some(r) = s.strip_prefix("sigma_") {
            (Target::Vol, r)
        } else {
            return Err(Error::Domain("objective must start with sigma_, price_ or log_price_"));
        };
        let model = match rest {
            "d" => Model::D,
            "h" => Model::H,
            "h_raw" => Model::HRaw,
            "sa2" => Model::Sa2,
            "kappa" => Model::Kappa,
            "bs" => Model::Bs,
            _ => return Err(Error::Domain("unknown objective model")),
        };
        Ok(Self::new(target, model))
    }
}

/// `y = (σ_prev√T/2)(2N⁻¹(Δ) − σ_prev√T)`, so that `N(d₊) = Δ` at volatility `σ_prev`.
pub fn delta_to_moneyness(delta: f64, sigma_prev: f64, t: f64) -> Result<f64> {
    ensure(delta > 0.0 && delta < 1.0, "delta", delta)?;
    ensure(sigma_prev > 0.0 && sigma_prev.is_finite(), "sigma_prev", sigma_prev)?;
    ensure(t > 0.0 && t.is_finite(), "expiry", t)?;
    let v = sigma_prev * t.sqrt();
    Ok(0.5 * v * (2.0 * norm_inv_cdf(delta) - v))
}

impl MarketQuote {
    /// Log-moneyness of the quote; deltas use `sigma_prev`. Calls and puts
    /// map identically since both enter through their implied volatility.
    pub fn log_moneyness(&self, sigma_prev: f64) -> Result<f64> {
        match self.moneyness {
            Moneyness::LogMoneyness(y) => Ok(y),
            Moneyness::Delta(d) => delta_to_moneyness(d, sigma_prev, self.expiry),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    /// Mean square of the residuals over the used quotes (`+∞` if none).
    pub mean_square: f64,
    pub used: usize,
    /// Quotes whose model value was non-finite or undefined.
    pub skipped: usize,
}

impl ObjectiveValue {
    pub fn rms(&self) -> f64 {
        self.mean_square.sqrt()
    }
}

/// Averaged squared ℓ₂ discrepancy of one day at the given parameters.
pub fn objective_value(day: &QuoteDay, params: FitParams, objective: &Objective, sigma_prev: f64) -> ObjectiveValue {
    let mut residuals = Vec::with_capacity(day.quotes.len());
    let mut skipped = 0;
    for q in &day.quotes {
        let r = q
            .log_moneyness(sigma_prev)
            .and_then(|y| objective.residual(y, q.expiry, q.implied_vol, params));
        match r {
            Ok(r) => residuals.push(r),
            Err(_) => skipped += 1,
        }
    }
    let mean_square = if residuals.is_empty() {
        f64::INFINITY
    } else {
        norms::mean_square(&residuals)
    };
    ObjectiveValue {
        mean_square,
        used: residuals.len(),
        skipped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitFlag {
    Converged,
    /// Budget exhausted; the best incumbent is reported.
    MaxIterations,
    /// Fewer distinct quote points than parameters: ν and ρ are not identified.
    Underdetermined,
}

impl fmt::Display for FitFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitFlag::Converged => "converged",
            FitFlag::MaxIterations => "max_iterations",
            FitFlag::Underdetermined => "underdetermined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    pub day: usize,
    pub objective: Objective,
    pub params: FitParams,
    /// In-sample RMS error.
    pub ise: f64,
    /// Out-of-sample RMS error at the previous day's parameters.
    pub ose: Option<f64>,
    pub flag: FitFlag,
    pub iterations: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub optimizer: NelderMeadOptions,
    /// Initial simplex steps in `(ν, σ, ρ)`.
    pub scale: [f64; 3],
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            optimizer: NelderMeadOptions::default(),
            scale: [0.1, 0.01, 0.1],
        }
    }
}

fn distinct_points(day: &QuoteDay, sigma_prev: f64) -> usize {
    let mut pts: Vec<(f64, f64)> = day
        .quotes
        .iter()
        .filter_map(|q| q.log_moneyness(sigma_prev).ok().map(|y| (q.expiry, y)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    pts.len()
}

/// Least-squares fit of one day from `init`.
pub fn fit_day(
    day: &QuoteDay,
    init: FitParams,
    objective: &Objective,
    sigma_prev: f64,
    options: &FitOptions,
) -> Result<CalibrationResult> {
    ensure(!day.quotes.is_empty(), "quotes", 0.0)?;
    ensure(init.in_bounds(), "init", init.nu)?;
    let f = |x: &[f64; 3]| objective_value(day, FitParams::from_array(*x), objective, sigma_prev).mean_square;
    let m = minimize(
        f,
        init.to_array(),
        options.scale,
        FitParams::LOWER,
        FitParams::UPPER,
        &options.optimizer,
    );
    let params = FitParams::from_array(m.x);
    let value = objective_value(day, params, objective, sigma_prev);
    let flag = if distinct_points(day, sigma_prev) < 3 {
        FitFlag::Underdetermined
    } else if m.converged {
        FitFlag::Converged
    } else {
        FitFlag::MaxIterations
    };
    Ok(CalibrationResult {
        day: day.day,
        objective: *objective,
        params,
        ise: value.rms(),
        ose: None,
        flag,
        iterations: m.iterations,
        skipped: value.skipped,
    })
}

/// RMS error of `day` at the previous day's parameters.
pub fn out_of_sample(day: &QuoteDay, prev: FitParams, objective: &Objective, sigma_prev: f64) -> f64 {
    objective_value(day, prev, objective, sigma_prev).rms()
}

/// Fits a panel in order; each day starts from, and converts deltas with,
/// the previous day's fit (`init` for the first day).
pub fn fit_panel(
    days: &[QuoteDay],
    init: FitParams,
    objective: &Objective,
    options: &FitOptions,
) -> Result<Vec<CalibrationResult>> {
    let mut out: Vec<CalibrationResult> = Vec::with_capacity(days.len());
    let mut prev = init;
    for (k, day) in days.iter().enumerate() {
        let mut fit = fit_day(day, prev, objective, prev.sigma, options)?;
        if k > 0 {
            fit.ose = Some(out_of_sample(day, prev, objective, prev.sigma));
        }
        prev = fit.params;
        out.push(fit);
    }
    Ok(out)
}

/// Panel statistics in the order ISE, OSE, ν̄, std ν, σ̄, std σ, ρ̄, std ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSummary {
    pub ise: f64,
    pub ose: f64,
    pub nu_mean: f64,
    pub nu_std: f64,
    pub sigma_mean: f64,
    pub sigma_std: f64,
    pub rho_mean: f64,
    pub rho_std: f64,
}

impl PanelSummary {
    pub const COLUMNS: [&'static str; 8] = [
        "ise",
        "ose",
        "nu_mean",
        "nu_std",
        "sigma_mean",
        "sigma_std",
        "rho_mean",
        "rho_std",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.ise,
            self.ose,
            self.nu_mean,
            self.nu_std,
            self.sigma_mean,
            self.sigma_std,
            self.rho_mean,
            self.rho_std,
        ]
    }
}

fn mean_std(v: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = v.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = v.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Means and sample standard deviations over a fitted panel; OSE averages
/// the days that have one.
pub fn summarize(results: &[CalibrationResult]) -> PanelSummary {
    let (ise, _) = mean_std(results.iter().map(|r| r.ise));
    let (ose, _) = mean_std(results.iter().filter_map(|r| r.ose));
    let (nu_mean, nu_std) = mean_std(results.iter().map(|r| r.params.nu));
    let (sigma_mean, sigma_std) = mean_std(results.iter().map(|r| r.params.sigma));
    let (rho_mean, rho_std) = mean_std(results.iter().map(|r| r.params.rho));
    PanelSummary {
        ise,
        ose,
        nu_mean,
        nu_std,
        sigma_mean,
        sigma_std,
        rho_mean,
        rho_std,
    }
}
