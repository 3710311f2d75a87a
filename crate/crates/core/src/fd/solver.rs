use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::grid::{base_time_steps, build_grid, Boundary, FdConfig, FdGrid};
use crate::math::c_rel;
use crate::{norms, Error, Result, SabrParams};

/// Boundary value at `(x, σ)` and time `t` (unit strike).
pub fn boundary_value(x: f64, sigma: f64, t: f64, mode: Boundary) -> Result<f64> {
    match mode {
        Boundary::BlackScholes => c_rel(x, sigma, t),
        Boundary::Zero if t == 0.0 => c_rel(x, sigma, 0.0),
        Boundary::Zero => Ok(0.0),
    }
}

/// Average of `(e^s − 1)₊` over `[x − h/2, x + h/2]`.
fn cell_average_payoff(x: f64, h: f64) -> f64 {
    let (a, b) = (x - 0.5 * h, x + 0.5 * h);
    if b <= 0.0 {
        return 0.0;
    }
    let lo = a.max(0.0);
    (b.exp_m1() - lo.exp_m1() - (b - lo)) / h
}

/// Forward-Euler stepper for
/// `∂ₜw = σ²[½(∂²ₓw − ∂ₓw) + νρ∂ₓ∂_σw + ½ν²∂²_σw]`
/// with central differences in `x` and divided differences on the
/// nonuniform σ-mesh.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: FdGrid,
    nu: f64,
    rho: f64,
    boundary: Boundary,
    /// Per σ-node: first-derivative weights `(j−1, j, j+1)`.
    d1: Vec<[f64; 3]>,
    /// Per σ-node: second-derivative weights.
    d2: Vec<[f64; 3]>,
    blowup: f64,
}

impl Stepper {
    pub fn new(grid: &FdGrid, params: &SabrParams, boundary: Boundary) -> Result<Self> {
        params.validate()?;
        params.require_no_mean_reversion()?;
        let s = &grid.sigma;
        let mut d1 = vec![[0.0; 3]; s.len()];
        let mut d2 = vec![[0.0; 3]; s.len()];
        for j in 1..s.len() - 1 {
            let (hm, hp) = (s[j] - s[j - 1], s[j + 1] - s[j]);
            let sum = hm + hp;
            d1[j] = [-hp / (hm * sum), (hp - hm) / (hm * hp), hm / (hp * sum)];
            d2[j] = [2.0 / (hm * sum), -2.0 / (hm * hp), 2.0 / (hp * sum)];
        }
        let x_max = grid.x[grid.nx() - 1];
        Ok(Self {
            grid: grid.clone(),
            nu: params.nu,
            rho: params.rho,
            boundary,
            d1,
            d2,
            blowup: 1e3 * (1.0 + x_max.exp()),
        })
    }

    pub fn grid(&self) -> &FdGrid {
        &self.grid
    }

    /// Initial surface: the payoff, either nodal or cell-averaged in `x`.
    pub fn initial(&self, smooth: bool) -> Vec<f64> {
        let g = &self.grid;
        let dx = g.dx();
        let mut w = Vec::with_capacity(g.nx() * g.nsigma());
        for &x in &g.x {
            let v = if smooth {
                cell_average_payoff(x, dx)
            } else {
                x.exp_m1().max(0.0)
            };
            w.extend(core::iter::repeat_n(v, g.nsigma()));
        }
        w
    }

    fn update_row(&self, w: &[f64], i: usize, dt: f64, row: &mut [f64]) -> f64 {
        let ns = self.grid.nsigma();
        let m = &w[(i - 1) * ns..i * ns];
        let c = &w[i * ns..(i + 1) * ns];
        let p = &w[(i + 1) * ns..(i + 2) * ns];
        let dx = self.grid.dx();
        let (inv_2dx, inv_dx2) = (0.5 / dx, 1.0 / (dx * dx));
        let cross = self.nu * self.rho;
        let half_nu2 = 0.5 * self.nu * self.nu;
        let mut peak: f64 = 0.0;
        for j in 1..ns - 1 {
            let [a1, b1, c1] = self.d1[j];
            let [a2, b2, c2] = self.d2[j];
            let wx = (p[j] - m[j]) * inv_2dx;
            let wxx = (p[j] - 2.0 * c[j] + m[j]) * inv_dx2;
            let ds_p = a1 * p[j - 1] + b1 * p[j] + c1 * p[j + 1];
            let ds_m = a1 * m[j - 1] + b1 * m[j] + c1 * m[j + 1];
            let wxs = (ds_p - ds_m) * inv_2dx;
            let wss = a2 * c[j - 1] + b2 * c[j] + c2 * c[j + 1];
            let s = self.grid.sigma[j];
            let v = c[j] + dt * s * s * (0.5 * (wxx - wx) + cross * wxs + half_nu2 * wss);
            row[j] = v;
            peak = if v.is_finite() {
                peak.max(v.abs())
            } else {
                f64::INFINITY
            };
        }
        peak
    }

    /// One explicit step from `w` (time `t_next − dt`) into `out` (time `t_next`).
    pub fn step(&self, w: &[f64], out: &mut [f64], dt: f64, t_next: f64) -> Result<()> {
        let g = &self.grid;
        let (nx, ns) = (g.nx(), g.nsigma());
        debug_assert_eq!(w.len(), nx * ns);

        let interior = &mut out[ns..(nx - 1) * ns];
        #[cfg(feature = "parallel")]
        let peak = {
            use rayon::prelude::*;
            interior
                .par_chunks_mut(ns)
                .enumerate()
                .map(|(k, row)| self.update_row(w, k + 1, dt, row))
                .reduce(|| 0.0, f64::max)
        };
        #[cfg(not(feature = "parallel"))]
        let peak = interior
            .chunks_mut(ns)
            .enumerate()
            .map(|(k, row)| self.update_row(w, k + 1, dt, row))
            .fold(0.0, f64::max);

        if !(peak <= self.blowup) {
            return Err(self.locate_instability(out, t_next));
        }

        for j in 0..ns {
            out[j] = boundary_value(g.x[0], g.sigma[j], t_next, self.boundary)?;
            out[(nx - 1) * ns + j] = boundary_value(g.x[nx - 1], g.sigma[j], t_next, self.boundary)?;
        }
        for i in 1..nx - 1 {
            out[i * ns] = boundary_value(g.x[i], g.sigma[0], t_next, self.boundary)?;
            out[i * ns + ns - 1] = boundary_value(g.x[i], g.sigma[ns - 1], t_next, self.boundary)?;
        }
        Ok(())
    }

    fn locate_instability(&self, out: &[f64], t: f64) -> Error {
        let g = &self.grid;
        let ns = g.nsigma();
        for i in 1..g.nx() - 1 {
            for j in 1..ns - 1 {
                let v = out[i * ns + j];
                if !(v.abs() <= self.blowup) {
                    return Error::Instability {
                        x: g.x[i],
                        sigma: g.sigma[j],
                        t,
                    };
                }
            }
        }
        Error::Instability {
            x: f64::NAN,
            sigma: f64::NAN,
            t,
        }
    }
}

/// Time-marched surface at the horizon of its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    pub grid: FdGrid,
    /// Values on all nodes, indexed by [`FdGrid::index`].
    pub values: Vec<f64>,
    pub window_x: RangeInclusive<usize>,
    pub window_sigma: RangeInclusive<usize>,
    /// `‖w_k − w_{k−1}‖₂/3` when the previous level is known.
    pub est_error: Option<f64>,
}

impl FdSolution {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// `(x, σ, w)` on the interest-window nodes.
    pub fn restriction(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for i in self.window_x.clone() {
            for j in self.window_sigma.clone() {
                out.push((self.grid.x[i], self.grid.sigma[j], self.value(i, j)));
            }
        }
        out
    }
}

/// Marches a given grid to its horizon.
pub fn solve_on_grid(params: &SabrParams, grid: FdGrid, config: &FdConfig) -> Result<FdSolution> {
    let stepper = Stepper::new(&grid, params, config.boundary)?;
    let n = grid.n_time_steps;
    let dt = grid.dt();
    let mut w = stepper.initial(config.smooth_payoff);
    let mut next = w.clone();
    for k in 1..=n {
        stepper.step(&w, &mut next, dt, k as f64 * dt)?;
        core::mem::swap(&mut w, &mut next);
    }
    let (window_x, window_sigma) = grid.window(config);
    Ok(FdSolution {
        grid,
        values: w,
        window_x,
        window_sigma,
        est_error: None,
    })
}

/// Level-`k` grid with `max(nt₀·4^k, stable count)` time steps, `nt₀` from level 0.
pub fn refined_grid(params: &SabrParams, expiry: f64, config: &FdConfig, level: u32, nt0: usize) -> Result<FdGrid> {
    let mut grid = build_grid(config, expiry, nt0, level)?;
    let stable = (expiry / (config.safety * grid.stable_dt(params))).ceil() as usize;
    grid.n_time_steps = grid.n_time_steps.max(stable);
    Ok(grid)
}

/// FD surface for `params` at horizon `expiry` on refinement level `level`.
pub fn solve(params: &SabrParams, expiry: f64, config: &FdConfig, level: u32) -> Result<FdSolution> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    let nt0 = base_time_steps(config, params, expiry)?;
    solve_on_grid(params, refined_grid(params, expiry, config, level, nt0)?, config)
}

/// Solutions `w_0, …, w_K` with successive differences on level-`k` window nodes.
#[derive(Debug, Clone)]
pub struct FdSequence {
    pub levels: Vec<FdSolution>,
    /// `diffs[k] = ‖w_{k+1} − w_k‖₂` over the window nodes of level `k`.
    pub diffs: Vec<f64>,
}

impl FdSequence {
    /// `‖w_{k+1} − w_k‖ / ‖w_k − w_{k−1}‖`, expected near 1/4.
    pub fn ratios(&self) -> Vec<f64> {
        self.diffs.windows(2).map(|d| d[1] / d[0]).collect()
    }

    pub fn finest(&self) -> &FdSolution {
        self.levels.last().expect("sequence is nonempty")
    }
}

/// Difference `fine − coarse` on the window nodes of `coarse`.
pub fn level_difference(coarse: &FdSolution, fine: &FdSolution) -> Vec<f64> {
    let stride = 1usize << (fine.grid.level - coarse.grid.level);
    let mut out = Vec::new();
    for i in coarse.window_x.clone() {
        for j in coarse.window_sigma.clone() {
            out.push(fine.value(i * stride, j * stride) - coarse.value(i, j));
        }
    }
    out
}

pub fn solve_sequence(params: &SabrParams, expiry: f64, config: &FdConfig, max_level: u32) -> Result<FdSequence> {
    params.validate()?;
    params.require_no_mean_reversion()?;
    let nt0 = base_time_steps(config, params, expiry)?;
    let mut levels: Vec<FdSolution> = Vec::new();
    let mut diffs = Vec::new();
    for level in 0..=max_level {
        let mut sol = solve_on_grid(params, refined_grid(params, expiry, config, level, nt0)?, config)?;
        if let Some(prev) = levels.last() {
            let d = norms::l2(&level_difference(prev, &sol));
            sol.est_error = Some(d / 3.0);
            diffs.push(d);
        }
        levels.push(sol);
    }
    Ok(FdSequence { levels, diffs })
}

/// `‖w − w̃‖₂` on the window, where `w̃` is solved on the domain enlarged by
/// one level-0 layer on every side with the same time step.
pub fn cutoff_sensitivity(params: &SabrParams, expiry: f64, config: &FdConfig, level: u32) -> Result<f64> {
    let big = config.enlarged();
    let nt0 = base_time_steps(config, params, expiry)?.max(base_time_steps(&big, params, expiry)?);
    let base = solve_on_grid(params, refined_grid(params, expiry, config, level, nt0)?, config)?;
    let mut grid = refined_grid(params, expiry, &big, level, nt0)?;
    grid.n_time_steps = base.grid.n_time_steps.max(grid.n_time_steps);
    let wide = solve_on_grid(params, grid, &big)?;
    let a = base.restriction();
    let b = wide.restriction();
    debug_assert_eq!(a.len(), b.len());
    let d: Vec<f64> = a.iter().zip(&b).map(|(p, q)| q.2 - p.2).collect();
    Ok(norms::l2(&d))
}

/// Norm selector for [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
    /// `‖ln C − ln w‖₂`.
    LogL2,
}

/// Discrepancy of a closed-form price against an FD surface over `I × J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub log_l2: f64,
}

impl Comparison {
    pub fn get(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L1 => self.l1,
            Norm::L2 => self.l2,
            Norm::Linf => self.linf,
            Norm::LogL2 => self.log_l2,
        }
    }
}

/// Compares `price_fn(y, σ)` (relative price, unit strike) with the surface.
/// `log_l2` is NaN when either side is nonpositive somewhere on the window.
pub fn compare<F>(solution: &FdSolution, price_fn: F) -> Result<Comparison>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut diff = Vec::new();
    let mut log_diff = Vec::new();
    for (x, s, w) in solution.restriction() {
        let c = price_fn(x, s)?;
        diff.push(c - w);
        // NaN flags a nonpositive price rather than aborting the other norms
        log_diff.push(if c > 0.0 && w > 0.0 { c.ln() - w.ln() } else { f64::NAN });
    }
    Ok(Comparison {
        l1: norms::l1(&diff),
        l2: norms::l2(&diff),
        linf: norms::linf(&diff),
        log_l2: norms::l2(&log_diff),
    })
}
