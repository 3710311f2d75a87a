use thiserror::Error;

/// Errors raised by the pricing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// A parameter violated its documented domain.
    #[error("invalid parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// The inputs are valid individually but the operation is undefined for them.
    #[error("numeric domain error: {0}")]
    Domain(&'static str),

    /// The operation is only defined without mean reversion (κ₀ = 0).
    #[error("operation requires kappa0 = 0, got {0}")]
    MeanReversionUnsupported(f64),

    /// An explicit finite-difference step produced a non-finite or exploding value.
    #[error("finite-difference instability at x = {x}, sigma = {sigma}, t = {t}")]
    Instability { x: f64, sigma: f64, t: f64 },

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, name: &'static str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}
