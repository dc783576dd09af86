//! Standard normal kernel.
//!
//! The upper tail `Q(x) = erfc(x/sqrt 2)/2` is evaluated directly, never as
//! `1 - cdf(x)`, so tail probabilities keep full relative precision.

use crate::scalar::Real;

/// Density `exp(-x^2/2)/sqrt(2 pi)`.
#[inline]
pub fn pdf<T: Real>(x: T) -> T {
    let inv_sqrt_2pi = T::FRAC_2_SQRT_PI() * T::FRAC_1_SQRT_2() / T::lit(2.0);
    inv_sqrt_2pi * (-(x * x) / T::lit(2.0)).exp()
}

/// Cumulative distribution `Pr{Z <= x}`.
#[inline]
pub fn cdf<T: Real>(x: T) -> T {
    (-x * T::FRAC_1_SQRT_2()).erfc() / T::lit(2.0)
}

/// Upper tail `Pr{Z > x}`.
#[inline]
pub fn sf<T: Real>(x: T) -> T {
    (x * T::FRAC_1_SQRT_2()).erfc() / T::lit(2.0)
}

/// `ln Pr{Z <= x}`, accurate for large positive `x`.
#[inline]
pub fn ln_cdf<T: Real>(x: T) -> T {
    if x >= T::zero() {
        (-sf(x)).ln_1p()
    } else {
        sf(-x).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Phi(x), Q(x)) computed with mpmath at 50-digit working precision.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64, f64); 9] = [
        (-8.0, 6.220960574271784123516e-16, 9.999999999999993779039e-1),
        (-5.5, 1.898956246588771938385e-8, 9.999999810104375341123e-1),
        (-3.0, 1.349898031630094526652e-3, 9.986501019683699054733e-1),
        (-1.25, 1.056497736668552576888e-1, 8.943502263331447423112e-1),
        (-0.1, 4.601721627229710185346e-1, 5.398278372770289814654e-1),
        (0.3, 6.179114221889526373065e-1, 3.820885778110473626935e-1),
        (1.7, 9.554345372414569605126e-1, 4.456546275854303948743e-2),
        (4.2, 9.999866542509840936616e-1, 1.334574901590633835309e-5),
        (7.9, 9.999999999999986054829e-1, 1.394517146659268252841e-15),
    ];

    #[test]
    fn cdf_matches_high_precision_reference() {
        for (x, phi, q) in REFERENCE {
            let got = cdf(x);
            assert!((got - phi).abs() <= 1e-12 * phi, "x={x}: {got} vs {phi}");
            assert!((sf(x) - q).abs() <= 1e-12 * q, "x={x}: {} vs {q}", sf(x));
        }
    }

    #[test]
    fn cdf_identities() {
        assert_eq!(cdf(0.0f64), 0.5);
        let mut prev = 0.0;
        for i in 0..=10_000 {
            let x = -8.0 + 16.0 * i as f64 / 10_000.0;
            let c = cdf(x);
            assert!(c >= prev, "not monotone at {x}");
            prev = c;
            if x >= 0.0 {
                assert!((cdf(-x) + cdf(x) - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        let h = 1e-5;
        for i in 0..=80 {
            let x = -8.0 + 0.2 * i as f64;
            let fd = (cdf(x + h) - cdf(x - h)) / (2.0 * h);
            assert!((fd - pdf(x)).abs() <= 1e-8, "x={x}");
        }
    }

    #[test]
    fn ln_cdf_keeps_precision_in_upper_tail() {
        // ln Phi(7.9) = -Q(7.9) to first order
        let q = 1.394517146659264e-15;
        assert!((ln_cdf(7.9f64) + q).abs() < 1e-26);
        assert!((ln_cdf(-3.0f64) - 1.349_898_031_630_094_6e-3f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn f32_kernel() {
        assert_eq!(cdf(0.0f32), 0.5);
        assert!((cdf(1.7f32) - 0.95543455).abs() < 1e-6);
    }
}
