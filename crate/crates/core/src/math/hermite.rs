use crate::{Error, Result};

/// Highest Hermite order used by the expansion (`H̃₅` appears in the delta).
pub const MAX_HERMITE_ORDER: usize = 5;

/// Probabilist's Hermite polynomial `H_n(x)` for `0 ≤ n ≤ 5`, via
/// `H_{n+1} = x·H_n − n·H_{n−1}`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::InvalidParameter {
            name: "hermite order",
            value: n as f64,
        });
    }
    Ok(hermite_all(x)[n])
}

/// `[H_0(x), …, H_5(x)]` in one pass of the recurrence.
pub fn hermite_all(x: f64) -> [f64; MAX_HERMITE_ORDER + 1] {
    let mut h = [0.0; MAX_HERMITE_ORDER + 1];
    h[0] = 1.0;
    h[1] = x;
    for n in 1..MAX_HERMITE_ORDER {
        h[n + 1] = x * h[n] - n as f64 * h[n - 1];
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_values() {
        assert_eq!(hermite(4, 0.0).unwrap(), 3.0);
        assert_eq!(hermite(1, 2.5).unwrap(), 2.5);
        assert_eq!(hermite(3, 1.0).unwrap(), -2.0);
        assert_eq!(hermite(0, 123.0).unwrap(), 1.0);
        assert!(hermite(6, 0.0).is_err());
    }

    #[test]
    fn matches_explicit_polynomials() {
        for i in -30..=30 {
            let x = i as f64 * 0.17;
            let h = hermite_all(x);
            let x2 = x * x;
            assert_relative_eq!(h[2], x2 - 1.0, max_relative = 1e-14, epsilon = 1e-14);
            assert_relative_eq!(h[3], x * x2 - 3.0 * x, max_relative = 1e-13, epsilon = 1e-13);
            assert_relative_eq!(h[4], x2 * x2 - 6.0 * x2 + 3.0, max_relative = 1e-13, epsilon = 1e-13);
            assert_relative_eq!(
                h[5],
                x2 * x2 * x - 10.0 * x2 * x + 15.0 * x,
                max_relative = 1e-13,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn derivative_identity() {
        // H_n' = n·H_{n−1}
        let step = 1e-5;
        for i in -10..=10 {
            let x = i as f64 * 0.3;
            let hp = hermite_all(x + step);
            let hm = hermite_all(x - step);
            let h = hermite_all(x);
            for n in 1..=MAX_HERMITE_ORDER {
                let fd = (hp[n] - hm[n]) / (2.0 * step);
                assert_relative_eq!(fd, n as f64 * h[n - 1], max_relative = 1e-7, epsilon = 1e-7);
            }
        }
    }
}
