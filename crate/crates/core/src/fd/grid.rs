use alloc::vec::Vec;
use core::ops::RangeInclusive;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::ensure;
use crate::{Result, SabrParams};

/// Boundary data imposed on `∂Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// The ν = 0 solution `e^{x}N(d₊) − N(d₋)`.
    #[default]
    BlackScholes,
    Zero,
}

/// The interest window `I × J` on which solutions are compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x: (f64, f64),
    pub sigma: (f64, f64),
}

impl Default for Window {
    fn default() -> Self {
        Self {
            x: (-1.0, 1.0),
            sigma: (0.1404, 0.2307),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub x_max: f64,
    /// Geometric center: `σ_min·σ_max = σ_center²`.
    pub sigma_center: f64,
    pub sigma_max: f64,
    /// Level-0 node counts.
    pub nx0: usize,
    pub nsigma0: usize,
    /// Fraction of the explicit stability limit used for the time step.
    pub safety: f64,
    pub boundary: Boundary,
    /// Start from cell averages of the payoff instead of nodal values.
    pub smooth_payoff: bool,
    pub window: Window,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            x_max: 3.0,
            sigma_center: 0.18,
            sigma_max: 1.6803,
            nx0: 13,
            nsigma0: 19,
            safety: 0.9,
            boundary: Boundary::BlackScholes,
            smooth_payoff: true,
            window: Window::default(),
        }
    }
}

impl FdConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.x_max > 0.0 && self.x_max.is_finite(), "x_max", self.x_max)?;
        ensure(self.sigma_center > 0.0, "sigma_center", self.sigma_center)?;
        ensure(
            self.sigma_max > self.sigma_center && self.sigma_max.is_finite(),
            "sigma_max",
            self.sigma_max,
        )?;
        ensure(self.nx0 >= 3, "nx0", self.nx0 as f64)?;
        ensure(self.nsigma0 >= 3, "nsigma0", self.nsigma0 as f64)?;
        ensure(self.safety > 0.0 && self.safety <= 1.0, "safety", self.safety)?;
        let w = self.window;
        ensure(
            w.x.0 <= w.x.1 && w.x.0 >= -self.x_max && w.x.1 <= self.x_max,
            "window.x",
            w.x.0,
        )?;
        ensure(
            w.sigma.0 <= w.sigma.1 && w.sigma.0 >= self.sigma_min() && w.sigma.1 <= self.sigma_max,
            "window.sigma",
            w.sigma.0,
        )
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_center * self.sigma_center / self.sigma_max
    }

    /// Ratio of consecutive level-0 σ-nodes.
    pub fn sigma_ratio(&self) -> f64 {
        (self.sigma_max / self.sigma_min()).powf(1.0 / (self.nsigma0 - 1) as f64)
    }

    /// The same mesh with one more level-0 layer on every side.
    pub fn enlarged(&self) -> Self {
        let dx0 = 2.0 * self.x_max / (self.nx0 - 1) as f64;
        Self {
            x_max: self.x_max + dx0,
            sigma_max: self.sigma_max * self.sigma_ratio(),
            nx0: self.nx0 + 2,
            nsigma0: self.nsigma0 + 2,
            ..*self
        }
    }
}

/// Tensor grid of level `k`: uniform in `x`, geometric in `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdGrid {
    pub x: Vec<f64>,
    pub sigma: Vec<f64>,
    pub level: u32,
    pub n_time_steps: usize,
    /// Horizon `T`.
    pub expiry: f64,
}

impl FdGrid {
    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn nsigma(&self) -> usize {
        self.sigma.len()
    }

    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn dt(&self) -> f64 {
        self.expiry / self.n_time_steps as f64
    }

    /// Flat index of node `(i, j)`; rows run along σ.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.sigma.len() + j
    }

    /// Largest stable step of the explicit scheme,
    /// `1 / max σ²(1/Δx² + ν²/Δσ² + |νρ|/(ΔxΔσ))` over interior nodes.
    pub fn stable_dt(&self, params: &SabrParams) -> f64 {
        let dx = self.dx();
        let (nu, rho) = (params.nu, params.rho);
        let mut rate: f64 = 0.0;
        for j in 1..self.sigma.len() - 1 {
            let s = self.sigma[j];
            let h = (s - self.sigma[j - 1]).min(self.sigma[j + 1] - s);
            let r = s * s * (1.0 / (dx * dx) + nu * nu / (h * h) + (nu * rho).abs() / (dx * h));
            rate = rate.max(r);
        }
        1.0 / rate
    }

    /// Index ranges of the window nodes. The window edges snap to the
    /// nearest level-0 nodes, so every level sees the same physical window.
    pub fn window(&self, config: &FdConfig) -> (RangeInclusive<usize>, RangeInclusive<usize>) {
        let stride = 1usize << self.level;
        let x0: Vec<f64> = self.x.iter().step_by(stride).copied().collect();
        let s0: Vec<f64> = self.sigma.iter().step_by(stride).map(|s| s.ln()).collect();
        let w = config.window;
        let ix = nearest(&x0, w.x.0) * stride..=nearest(&x0, w.x.1) * stride;
        let is = nearest(&s0, w.sigma.0.ln()) * stride..=nearest(&s0, w.sigma.1.ln()) * stride;
        (ix, is)
    }
}

fn nearest(nodes: &[f64], v: f64) -> usize {
    let mut best = 0;
    for (k, &n) in nodes.iter().enumerate() {
        if (n - v).abs() < (nodes[best] - v).abs() {
            best = k;
        }
    }
    best
}

/// Grid of the given level; `(nx0 − 1)·2^k + 1` x-nodes and likewise in σ.
pub fn build_grid(config: &FdConfig, expiry: f64, nt0: usize, level: u32) -> Result<FdGrid> {
    config.validate()?;
    ensure(expiry > 0.0 && expiry.is_finite(), "expiry", expiry)?;
    ensure(nt0 > 0, "nt0", nt0 as f64)?;
    ensure(level <= 8, "level", level as f64)?;
    let scale = 1usize << level;
    let nx = (config.nx0 - 1) * scale + 1;
    let ns = (config.nsigma0 - 1) * scale + 1;
    let x = (0..nx)
        .map(|i| config.x_max * (2.0 * i as f64 / (nx - 1) as f64 - 1.0))
        .collect();
    let (lo, hi) = (config.sigma_min().ln(), config.sigma_max.ln());
    let sigma = (0..ns)
        .map(|j| (lo + (hi - lo) * j as f64 / (ns - 1) as f64).exp())
        .collect();
    Ok(FdGrid {
        x,
        sigma,
        level,
        n_time_steps: nt0 * scale * scale,
        expiry,
    })
}

/// Level-0 step count satisfying the stability bound with the configured safety.
pub fn base_time_steps(config: &FdConfig, params: &SabrParams, expiry: f64) -> Result<usize> {
    let grid = build_grid(config, expiry, 1, 0)?;
    let dt = config.safety * grid.stable_dt(params);
    Ok(((expiry / dt).ceil() as usize).max(1))
}
