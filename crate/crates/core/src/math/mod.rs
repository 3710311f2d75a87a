//! Shared kernels: normal distribution, Hermite polynomials, the heat kernel
//! `φ_t` and Black-Scholes.

pub(crate) mod black_scholes;
mod hermite;
mod implied;
pub(crate) mod kernel;
mod normal;

pub use black_scholes::{bs_call, c_rel, d_pair, DPair, OptionQuery};
pub use hermite::{hermite, hermite_all, MAX_HERMITE_ORDER};
pub use implied::{bs_implied_vol, IMPLIED_VOL_BRACKET};
pub use kernel::{h_tilde, phi_t};
pub use normal::{norm_cdf, norm_inv_cdf, norm_pdf};
