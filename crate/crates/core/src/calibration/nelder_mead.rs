//! Derivative-free Nelder–Mead on a box, with restarts from the incumbent.

use alloc::vec::Vec;
use core::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop when `f_max − f_min ≤ f_tol·(|f_min| + f_tol)` over the simplex.
    pub f_tol: f64,
    /// Total function-evaluation budget across restarts.
    pub max_iterations: usize,
    /// Fresh simplices built around the incumbent after convergence.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-10,
            max_iterations: 2000,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn project<const N: usize>(mut x: [f64; N], lo: &[f64; N], hi: &[f64; N]) -> [f64; N] {
    for k in 0..N {
        x[k] = x[k].clamp(lo[k], hi[k]);
    }
    x
}

fn lerp<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    core::array::from_fn(|k| a[k] + t * (b[k] - a[k]))
}

/// Minimizes `f` over `[lo, hi]` from `x0`; `scale` sets the initial simplex.
/// Non-finite values are treated as `+∞`. The incumbent is always returned.
pub fn minimize<const N: usize, F>(
    f: F,
    x0: [f64; N],
    scale: [f64; N],
    lo: [f64; N],
    hi: [f64; N],
    options: &NelderMeadOptions,
) -> Minimum<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let evals = Cell::new(0usize);
    let eval = |x: &[f64; N]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let start = project(x0, &lo, &hi);
    let mut best = (start, eval(&start));
    let mut converged = false;

    for _round in 0..=options.restarts {
        // simplex around the incumbent, stepping inward when a bound is hit
        let mut pts = Vec::with_capacity(N + 1);
        pts.push(best);
        for k in 0..N {
            let mut x = best.0;
            x[k] += scale[k];
            if x[k] > hi[k] {
                x[k] = best.0[k] - scale[k];
            }
            let x = project(x, &lo, &hi);
            pts.push((x, eval(&x)));
        }
        converged = false;

        while evals.get() < options.max_iterations {
            pts.sort_by(|a, b| a.1.total_cmp(&b.1));
            if pts[N].1 - pts[0].1 <= options.f_tol * (pts[0].1.abs() + options.f_tol) {
                converged = true;
                break;
            }
            let centroid: [f64; N] = core::array::from_fn(|k| pts[..N].iter().map(|p| p.0[k]).sum::<f64>() / N as f64);
            let worst = pts[N];
            let reflect = project(lerp(&centroid, &worst.0, -1.0), &lo, &hi);
            let fr = eval(&reflect);
            if fr < pts[0].1 {
                let expand = project(lerp(&centroid, &worst.0, -2.0), &lo, &hi);
                let fe = eval(&expand);
                pts[N] = if fe < fr { (expand, fe) } else { (reflect, fr) };
            } else if fr < pts[N - 1].1 {
                pts[N] = (reflect, fr);
            } else {
                let (contract, fc) = if fr < worst.1 {
                    let c = project(lerp(&centroid, &worst.0, -0.5), &lo, &hi);
                    (c, eval(&c))
                } else {
                    let c = lerp(&centroid, &worst.0, 0.5);
                    (c, eval(&c))
                };
                if fc < worst.1.min(fr) {
                    pts[N] = (contract, fc);
                } else {
                    let anchor = pts[0].0;
                    for p in pts[1..].iter_mut() {
                        let x = lerp(&anchor, &p.0, 0.5);
                        *p = (x, eval(&x));
                    }
                }
            }
        }
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = pts[0].1 < best.1;
        if pts[0].1 <= best.1 {
            best = pts[0];
        }
        if !converged || !improved {
            break;
        }
    }

    Minimum {
        x: best.0,
        f: best.1,
        iterations: evals.get(),
        converged,
    }
}
