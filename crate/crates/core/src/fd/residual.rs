//! `R = K·‖(∂_t − L)C‖₂` over a lattice of `(T, σ, y)`, with every
//! derivative taken by central differences of the candidate price.

use alloc::vec::Vec;

use crate::error::ensure;
use crate::{norms, Result, SabrParams};

/// Relative step in `t` and `σ`; the `y` step is this value in absolute terms.
pub const RESIDUAL_REL_STEP: f64 = 1e-3;

/// `n` equally spaced nodes from `lo` to `hi` (just `lo` when `n = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Lattice {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.n > 1 {
            (self.hi - self.lo) / (self.n - 1) as f64
        } else {
            0.0
        };
        (0..self.n).map(move |k| self.lo + step * k as f64)
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        ensure(self.n > 0, name, self.n as f64)?;
        ensure(
            self.lo <= self.hi && self.lo.is_finite() && self.hi.is_finite(),
            name,
            self.lo,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRegion {
    pub t: Lattice,
    pub sigma: Lattice,
    pub y: Lattice,
    /// Strike `K` multiplying the relative price.
    pub strike_scale: f64,
}

impl ResidualRegion {
    pub fn validate(&self) -> Result<()> {
        self.t.validate("t")?;
        self.sigma.validate("sigma")?;
        self.y.validate("y")?;
        ensure(self.t.lo > 0.0, "t", self.t.lo)?;
        ensure(self.sigma.lo > 0.0, "sigma", self.sigma.lo)?;
        ensure(self.strike_scale > 0.0, "strike_scale", self.strike_scale)
    }

    pub fn len(&self) -> usize {
        self.t.n * self.sigma.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Residual of `price_fn(y, σ, t)` (relative price) under the generator
/// `L = σ²[½(∂²_y − ∂_y) + νρ∂_y∂_σ + ½ν²∂²_σ] + κ(θ − σ)∂_σ` with `κ = ν·κ₀`.
pub fn residual_norm<F>(price_fn: F, params: &SabrParams, region: &ResidualRegion) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    params.validate()?;
    region.validate()?;
    let (nu, rho) = (params.nu, params.rho);
    let (kappa, theta) = (params.kappa(), params.theta);
    let mut acc = Vec::with_capacity(region.len());
    for t in region.t.nodes() {
        for s in region.sigma.nodes() {
            for y in region.y.nodes() {
                let (ht, hs, hy) = (RESIDUAL_REL_STEP * t, RESIDUAL_REL_STEP * s, RESIDUAL_REL_STEP);
                let c = price_fn(y, s, t)?;
                let c_t = (price_fn(y, s, t + ht)? - price_fn(y, s, t - ht)?) / (2.0 * ht);
                let (c_yp, c_ym) = (price_fn(y + hy, s, t)?, price_fn(y - hy, s, t)?);
                let (c_sp, c_sm) = (price_fn(y, s + hs, t)?, price_fn(y, s - hs, t)?);
                let c_y = (c_yp - c_ym) / (2.0 * hy);
                let c_yy = (c_yp - 2.0 * c + c_ym) / (hy * hy);
                let c_s = (c_sp - c_sm) / (2.0 * hs);
                let c_ss = (c_sp - 2.0 * c + c_sm) / (hs * hs);
                let c_ys = (price_fn(y + hy, s + hs, t)? - price_fn(y + hy, s - hs, t)? - price_fn(y - hy, s + hs, t)?
                    + price_fn(y - hy, s - hs, t)?)
                    / (4.0 * hy * hs);
                let l =
                    s * s * (0.5 * (c_yy - c_y) + nu * rho * c_ys + 0.5 * nu * nu * c_ss) + kappa * (theta - s) * c_s;
                acc.push(region.strike_scale * (c_t - l));
            }
        }
    }
    Ok(norms::l2(&acc))
}
