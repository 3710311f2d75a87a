//! Explicit finite differences for the κ = 0 pricing PDE in `(x, σ)` on the
//! cut-off rectangle `[−x_max, x_max] × [σ_min, σ_max]`, plus the residual
//! diagnostic used to score closed-form prices.
//!
//! The σ-mesh is geometric with `σ_min·σ_max = σ_center²`. Each refinement
//! level halves both meshes (geometric midpoints in σ) and multiplies the
//! number of time steps by 4, so `‖w_{k+1} − w_k‖ ≈ ‖w_k − w_{k−1}‖/4` for
//! a second-order scheme and `‖w − w_k‖ ≈ ‖w_k − w_{k−1}‖/3`.

mod grid;
mod residual;
mod solver;

pub use grid::{base_time_steps, build_grid, Boundary, FdConfig, FdGrid, Window};
pub use residual::{residual_norm, Lattice, ResidualRegion, RESIDUAL_REL_STEP};
pub use solver::{
    boundary_value, compare, cutoff_sensitivity, level_difference, refined_grid, solve, solve_on_grid, solve_sequence,
    Comparison, FdSequence, FdSolution, Norm, Stepper,
};
