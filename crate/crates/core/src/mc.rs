//! Monte Carlo benchmark for κ = 0.
//!
//! The volatility path is sampled exactly, `σ(t) = σ₀·exp(νW₂(t) − ν²t/2)`;
//! the log-forward takes log-Euler steps driven by `W₁ = ρZ₂ + √(1 − ρ²)Z₁`.
//! Paths are split into fixed-size blocks, each with its own ChaCha stream,
//! and block sums are reduced in block order, so the result depends only on
//! the seed and never on the thread schedule.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::ensure;
use crate::math::OptionQuery;
use crate::{Result, SabrParams};

/// Samples (antithetic pairs count as one sample) per random stream.
const BLOCK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    /// Requested step; the used step is `T/round(T/dt)`.
    pub dt: f64,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 30_000,
            dt: 1e-4,
            seed: 1,
            antithetic: true,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.n_paths > 0, "n_paths", self.n_paths as f64)?;
        ensure(self.dt > 0.0 && self.dt.is_finite(), "dt", self.dt)
    }

    /// Number of steps and the adjusted step for horizon `t`.
    pub fn steps(&self, t: f64) -> (usize, f64) {
        let n = ((t / self.dt).round() as usize).max(1);
        (n, t / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Discounted mean payoff.
    pub price: f64,
    pub std_error: f64,
    /// Sample mean of the simulated forward at expiry.
    pub forward_mean: f64,
    pub forward_std_error: f64,
    /// Independent samples behind the estimates (pairs when antithetic).
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    payoff: f64,
    payoff_sq: f64,
    forward: f64,
    forward_sq: f64,
}

impl Sums {
    fn add(&mut self, payoff: f64, forward: f64) {
        self.payoff += payoff;
        self.payoff_sq += payoff * payoff;
        self.forward += forward;
        self.forward_sq += forward * forward;
    }

    fn merge(mut self, other: Sums) -> Sums {
        self.payoff += other.payoff;
        self.payoff_sq += other.payoff_sq;
        self.forward += other.forward;
        self.forward_sq += other.forward_sq;
        self
    }
}

struct PathModel {
    x0: f64,
    strike: f64,
    sigma0: f64,
    nu: f64,
    rho: f64,
    rho_bar: f64,
    steps: usize,
    dt: f64,
}

impl PathModel {
    /// Terminal forward along a path; `sign = −1` gives the antithetic twin.
    fn forward(&self, normals: &[(f64, f64)], sign: f64) -> f64 {
        let sqrt_dt = self.dt.sqrt();
        let vol_drift = -0.5 * self.nu * self.nu * self.dt;
        let mut x = self.x0;
        let mut log_sigma = self.sigma0.ln();
        for &(z1, z2) in normals {
            let (z1, z2) = (sign * z1, sign * z2);
            let sigma = log_sigma.exp();
            let w1 = self.rho * z2 + self.rho_bar * z1;
            x += -0.5 * sigma * sigma * self.dt + sigma * sqrt_dt * w1;
            log_sigma += vol_drift + self.nu * sqrt_dt * z2;
        }
        x.exp()
    }

    fn block(&self, seed: u64, index: usize, samples: usize, antithetic: bool) -> Sums {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut normals = Vec::with_capacity(self.steps);
        let mut sums = Sums::default();
        for _ in 0..samples {
            normals.clear();
            for _ in 0..self.steps {
                let z1: f64 = StandardNormal.sample(&mut rng);
                let z2: f64 = StandardNormal.sample(&mut rng);
                normals.push((z1, z2));
            }
            let f = self.forward(&normals, 1.0);
            let (payoff, forward) = if antithetic {
                let g = self.forward(&normals, -1.0);
                let pay = 0.5 * ((f - self.strike).max(0.0) + (g - self.strike).max(0.0));
                (pay, 0.5 * (f + g))
            } else {
                ((f - self.strike).max(0.0), f)
            };
            sums.add(payoff, forward);
        }
        sums
    }
}

fn mean_and_error(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Discounted call price with its standard error.
pub fn simulate_price(query: &OptionQuery, params: &SabrParams, config: &McConfig) -> Result<McEstimate> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    config.validate()?;
    let t = query.expiry;
    let forward0 = query.forward();
    if t == 0.0 {
        return Ok(McEstimate {
            price: (forward0 - query.strike).max(0.0),
            std_error: 0.0,
            forward_mean: forward0,
            forward_std_error: 0.0,
            samples: 1,
        });
    }

    let (steps, dt) = config.steps(t);
    let model = PathModel {
        x0: forward0.ln(),
        strike: query.strike,
        sigma0: params.sigma0,
        nu: params.nu,
        rho: params.rho,
        rho_bar: (1.0 - params.rho * params.rho).sqrt(),
        steps,
        dt,
    };
    let samples = if config.antithetic {
        config.n_paths.div_ceil(2)
    } else {
        config.n_paths
    };
    let n_blocks = samples.div_ceil(BLOCK);
    let block_len = |b: usize| BLOCK.min(samples - b * BLOCK);
    let run = |b: usize| model.block(config.seed, b, block_len(b), config.antithetic);

    #[cfg(feature = "parallel")]
    let blocks: Vec<Sums> = {
        use rayon::prelude::*;
        (0..n_blocks).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let blocks: Vec<Sums> = (0..n_blocks).map(run).collect();

    let total = blocks.into_iter().fold(Sums::default(), Sums::merge);
    let (payoff, payoff_err) = mean_and_error(total.payoff, total.payoff_sq, samples);
    let (forward_mean, forward_std_error) = mean_and_error(total.forward, total.forward_sq, samples);
    let discount = query.discount();
    Ok(McEstimate {
        price: discount * payoff,
        std_error: discount * payoff_err,
        forward_mean,
        forward_std_error,
        samples,
    })
}
