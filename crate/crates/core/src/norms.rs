//! Averaged discrete norms: `‖a‖₁ = |I|⁻¹Σ|aᵢ|`, `‖a‖₂² = |I|⁻¹Σaᵢ²`;
//! `‖a‖_∞` is not normalized. All return 0 for an empty slice.

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub fn l1(a: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.iter().map(|v| v.abs()).sum::<f64>() / a.len() as f64
}

/// Averaged mean square, the square of [`l2`].
pub fn mean_square(a: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.iter().map(|v| v * v).sum::<f64>() / a.len() as f64
}

pub fn l2(a: &[f64]) -> f64 {
    mean_square(a).sqrt()
}

pub fn linf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}
