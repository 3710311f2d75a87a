//! Parameter sets of the published benchmark tables.

use crate::fd::{Lattice, ResidualRegion};
use crate::math::OptionQuery;
use crate::mc::McConfig;
use crate::SabrParams;

/// A residual benchmark: model parameters plus the `(T, σ, y)` lattice.
/// `params.sigma0` is unused (σ ranges over the lattice).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualCase {
    pub params: SabrParams,
    pub region: ResidualRegion,
}

/// Strike multiplying the relative prices in the residual tables.
pub const RESIDUAL_STRIKE: f64 = 10.0;

fn residual_case(nu: f64, t: (f64, f64), y: (f64, f64)) -> ResidualCase {
    ResidualCase {
        params: SabrParams {
            sigma0: 0.2,
            nu,
            rho: -0.4,
            kappa0: 0.0,
            theta: 0.0,
        },
        region: ResidualRegion {
            t: Lattice::new(t.0, t.1, 10),
            sigma: Lattice::new(0.1, 0.3, 9),
            y: Lattice::new(y.0, y.1, 11),
            strike_scale: RESIDUAL_STRIKE,
        },
    }
}

/// ν = 0.125, ρ = −0.4, T ∈ [0.1, 1], σ ∈ [0.1, 0.3], y ∈ [−0.5, 0.5].
pub fn table4() -> ResidualCase {
    residual_case(0.125, (0.1, 1.0), (-0.5, 0.5))
}

/// Published `10³R` for `(C_H, C_D, C_SA,2, C_BS)`.
pub const TABLE4_VALUES: [f64; 4] = [0.489, 0.181, 0.163, 16.436];

/// Rows of the continued residual table (1-based), reported as `10²R`.
pub fn table5(row: usize) -> Option<ResidualCase> {
    let (nu, t, y) = match row {
        1 => (0.1, (0.1, 30.0), (-0.3, 0.3)),
        2 => (0.1, (0.1, 30.0), (-1.5, 1.5)),
        3 => (0.25, (0.1, 0.2), (-1.5, 1.5)),
        4 => (1.0, (0.1, 1.0), (-0.2, 0.2)),
        5 => (1.0, (0.1, 1.0), (-1.0, 1.0)),
        6 => (1.0, (0.1, 2.0), (-0.2, 0.2)),
        _ => return None,
    };
    Some(residual_case(nu, t, y))
}

/// Published `10²R` per row of [`table5`].
pub const TABLE5_VALUES: [[f64; 4]; 6] = [
    [0.33, 0.07, 0.072, 1.8],
    [0.38, 0.28, 0.37, 1.8],
    [0.02, 0.016, 0.018, 1.4],
    [3.2, 2.4, 5.2, 18.8],
    [4.3, 26.0, 14.8, 15.5],
    [6.1, 4.0, 7.0, 17.5],
];

/// An FD comparison row: horizon, ν and ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdCase {
    pub expiry: f64,
    pub nu: f64,
    pub rho: f64,
}

impl FdCase {
    /// Parameters with σ₀ at the window center.
    pub fn params(&self) -> SabrParams {
        SabrParams {
            sigma0: 0.18,
            nu: self.nu,
            rho: self.rho,
            kappa0: 0.0,
            theta: 0.0,
        }
    }
}

/// Rows of the ρ = −0.2 FD table (1-based).
pub fn fd1(row: usize) -> Option<FdCase> {
    let (expiry, nu) = match row {
        1 => (5.0, 1.0),
        2 => (2.0, 1.5),
        3 => (2.0, 1.0),
        4 => (2.0, 0.5),
        5 | 6 => (1.0, 1.5),
        7 => (1.0, 1.0),
        8 => (0.5, 1.0),
        _ => return None,
    };
    Some(FdCase { expiry, nu, rho: -0.2 })
}

/// Published ×100 norms per [`fd1`] row: `‖δC_H‖₂, ‖δC_H‖_∞, log C_H,
/// ‖δC_SA,2‖₂, ‖δC_SA,2‖_∞, log C_SA,2, ‖δ_HD‖₂, est error`.
pub const FD1_VALUES: [[f64; 8]; 8] = [
    [10.5, 22.7, 74.3, 7.35, 16.8, 55.3, 5.32, 0.036],
    [6.32, 14.2, 78.0, 2.91, 7.72, 56.7, 5.9, 0.0102],
    [1.45, 3.28, 35.3, 0.939, 2.26, 38.6, 1.72, 0.0091],
    [0.1, 0.23, 4.03, 0.136, 0.398, 6.68, 0.179, 0.0022],
    [1.25, 2.81, 43.9, 0.741, 1.6, 56.4, 1.7, 0.0442],
    [1.24, 2.9, 43.3, 0.732, 1.61, 56.4, 1.69, 0.011],
    [0.241, 0.53, 14.3, 0.2379, 0.608, 22.2, 0.403, 0.0101],
    [0.029, 0.088, 2.13, 0.051, 0.179, 4.83, 0.0665, 0.003],
];

/// Rows of the ρ = −0.5 FD table (1-based).
pub fn fd2(row: usize) -> Option<FdCase> {
    let expiry = match row {
        1 => 2.0,
        2 => 1.0,
        3 => 0.5,
        _ => return None,
    };
    Some(FdCase {
        expiry,
        nu: 1.0,
        rho: -0.5,
    })
}

/// The Monte Carlo benchmark: `F = K = 10`, σ = 0.2, ν = 0.2, ρ = −0.3, T = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCase {
    pub query: OptionQuery,
    pub params: SabrParams,
    pub config: McConfig,
}

pub fn mc_benchmark() -> McCase {
    McCase {
        query: OptionQuery {
            spot: 10.0,
            strike: 10.0,
            rate: 0.0,
            expiry: 1.0,
        },
        params: SabrParams {
            sigma0: 0.2,
            nu: 0.2,
            rho: -0.3,
            kappa0: 0.0,
            theta: 0.0,
        },
        config: McConfig {
            n_paths: 30_000,
            dt: 1e-4,
            seed: 1,
            antithetic: true,
        },
    }
}
