//! Pricing and calibration kernels for the λSABR stochastic-volatility model
//! (β = 1, optional mean reversion `κ(θ − σ)` with `κ = ν·κ₀`).
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.
//! Everything here is pure computation: IO, CSV and the command-line front
//! end live in the `lsabr` companion crate.
//!
//! Layout:
//! - [`math`]: normal distribution, Hermite polynomials, the Gaussian kernel
//!   `φ_t`, Black-Scholes and implied-volatility inversion.
//! - [`expansion`]: closed-form second-order vol-of-vol expansion of the
//!   price (`F_BS + νF₁ + ν²F₂`), the implied-vol coefficients `e₁`, `e₂`
//!   and the delta expansion.
//! - [`hagan`]: the β = 1 Hagan formula with a regularized `z/ξ(z)`.
//! - [`fd`]: explicit finite differences on a cut-off rectangle, the
//!   refinement sequence and the PDE residual diagnostic.
//! - [`mc`]: Monte Carlo benchmark for κ = 0.
//! - [`calibration`]: daily least-squares fits of `(ν, σ, ρ)`.
//! - [`mean_reversion`]: deterministic mean-reverting volatility (ν = 0).
//! - [`presets`]: parameter sets of the published benchmark tables.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibration;
mod error;
pub mod expansion;
pub mod fd;
pub mod hagan;
pub mod math;
pub mod mc;
pub mod mean_reversion;
pub mod norms;
mod params;
pub mod presets;

pub use error::{Error, Result};
pub use params::SabrParams;
