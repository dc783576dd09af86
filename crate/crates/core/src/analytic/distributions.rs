//! Closed-form PAPR distributions under the i.i.d. Gaussian sample model.
//!
//! Every `F^N` or `[.]^(N-2)` power is taken in log space, and every CCDF is
//! returned as `-expm1(N ln F)`, so tails down to `1e-300` survive `N = 4096`.

use super::normal;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_ratio<T: Real>(name: &str, r: T) -> Result<()> {
    if r >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be a non-negative ratio, got {r}")))
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("N must be at least {min}, got {n}")))
    }
}

/// CCDF of the PAPR of complex OFDM with `n` samples: `1 - (1 - e^{-r})^n`.
pub fn ccdf_papr_complex<T: Real>(r: T, n: usize) -> Result<T> {
    check_ratio("r", r)?;
    check_n(n, 1)?;
    Ok(-(T::of_usize(n) * (-(-r).exp()).ln_1p()).exp_m1())
}

/// CCDF of the two-sided PAPR of real OFDM: `1 - [Phi(sqrt r) - Phi(-sqrt r)]^n`.
pub fn ccdf_papr_real<T: Real>(r: T, n: usize) -> Result<T> {
    check_ratio("r", r)?;
    check_n(n, 1)?;
    let q = normal::sf(r.sqrt());
    Ok(-(T::of_usize(n) * (-(q + q)).ln_1p()).exp_m1())
}

/// CCDF of the upper PAPR: `1 - Phi^n(sqrt r)`.
pub fn ccdf_upapr<T: Real>(r: T, n: usize) -> Result<T> {
    check_ratio("r", r)?;
    check_n(n, 1)?;
    Ok(-(T::of_usize(n) * normal::ln_cdf(r.sqrt())).exp_m1())
}

/// CCDF of the lower PAPR; the same law as [`ccdf_upapr`].
pub fn ccdf_lpapr<T: Real>(r: T, n: usize) -> Result<T> {
    ccdf_upapr(r, n)
}

/// `ln [1 - q_l - q_u]`, the log of the probability that one sample lies in
/// `[-sqrt r_l, sqrt r_u]` given the two tail masses.
#[inline]
fn ln_interval<T: Real>(q_l: T, q_u: T) -> T {
    (-(q_l + q_u)).ln_1p()
}

/// Joint CDF from the per-sample tail masses `q_l = Q(sqrt r_l)`, `q_u = Q(sqrt r_u)`.
#[inline]
pub fn joint_cdf_from_tails<T: Real>(q_l: T, q_u: T, n: usize) -> T {
    (T::of_usize(n) * ln_interval(q_l, q_u)).exp()
}

/// `1 -` [`joint_cdf_from_tails`], without cancellation.
#[inline]
pub fn joint_ccdf_from_tails<T: Real>(q_l: T, q_u: T, n: usize) -> T {
    -(T::of_usize(n) * ln_interval(q_l, q_u)).exp_m1()
}

/// Joint CDF `Pr{L <= r_l, U <= r_u} = [Phi(sqrt r_u) - Phi(-sqrt r_l)]^n`.
pub fn joint_cdf<T: Real>(r_l: T, r_u: T, n: usize) -> Result<T> {
    check_ratio("r_l", r_l)?;
    check_ratio("r_u", r_u)?;
    check_n(n, 1)?;
    Ok(joint_cdf_from_tails(normal::sf(r_l.sqrt()), normal::sf(r_u.sqrt()), n))
}

/// Joint density in the square-root coordinates `t_l = sqrt r_l`, `t_u = sqrt r_u`:
/// `phi(t_l) phi(t_u) n(n-1) [Phi(t_u) - Phi(-t_l)]^(n-2)`.
///
/// Equals `4 t_l t_u` times [`joint_pdf`], which removes its singularity at
/// the origin.
#[inline]
pub fn joint_density_sqrt<T: Real>(t_l: T, t_u: T, n: usize) -> T {
    let nf = T::of_usize(n);
    let power = T::of_usize(n - 2) * ln_interval(normal::sf(t_l), normal::sf(t_u));
    normal::pdf(t_l) * normal::pdf(t_u) * nf * (nf - T::one()) * power.exp()
}

/// Joint density of (LPAPR, UPAPR):
/// `phi(sqrt r_u) phi(sqrt r_l) / (4 sqrt(r_l r_u)) n(n-1) [Phi(sqrt r_u) - Phi(-sqrt r_l)]^(n-2)`.
pub fn joint_pdf<T: Real>(r_l: T, r_u: T, n: usize) -> Result<T> {
    if !(r_l > T::zero() && r_u > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "joint density needs strictly positive ratios, got ({r_l}, {r_u})"
        )));
    }
    check_n(n, 2)?;
    let (t_l, t_u) = (r_l.sqrt(), r_u.sqrt());
    Ok(joint_density_sqrt(t_l, t_u, n) / (T::lit(4.0) * t_l * t_u))
}

/// Validates a biasing ratio restricted to `[0, 0.5]`.
pub fn check_biasing_ratio<T: Real>(varsigma: T) -> Result<()> {
    if varsigma >= T::zero() && varsigma <= T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "biasing ratio must lie in [0, 0.5], got {varsigma}"
        )))
    }
}

/// Probability that a symbol scaled to back-off `gamma` and biased at ratio
/// `varsigma` leaves the dynamic range: `1 - F(varsigma^2 gamma, (1-varsigma)^2 gamma)`.
pub fn violation_probability<T: Real>(gamma: T, varsigma: T, n: usize) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidArgument(format!("back-off must be positive, got {gamma}")));
    }
    check_biasing_ratio(varsigma)?;
    check_n(n, 1)?;
    let root = gamma.sqrt();
    // sqrt of the two joint-CDF arguments
    let t_l = varsigma * root;
    let t_u = (T::one() - varsigma) * root;
    Ok(joint_ccdf_from_tails(normal::sf(t_l), normal::sf(t_u), n))
}

/// Back-off at which [`violation_probability`] equals `target`, found by
/// bisection in `ln gamma`.
pub fn required_backoff<T: Real>(target: T, varsigma: T, n: usize) -> Result<T> {
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::InvalidArgument(format!("target probability must lie in (0, 1), got {target}")));
    }
    if !(varsigma > T::zero()) {
        return Err(Error::InvalidArgument("biasing ratio 0 never meets a target below 1".into()));
    }
    let mut lo = T::lit(1e-6).ln();
    let mut hi = T::lit(1e12).ln();
    if violation_probability(hi.exp(), varsigma, n)? > target {
        return Err(Error::InvalidArgument("target below the reachable range".into()));
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if violation_probability(mid.exp(), varsigma, n)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * hi.abs().max(T::one()) {
            break;
        }
    }
    Ok(((lo + hi) / T::lit(2.0)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_ccdf_edges() {
        assert_eq!(ccdf_papr_complex(0.0f64, 64).unwrap(), 1.0);
        for r in [0.1f64, 1.0, 7.5] {
            assert!((ccdf_papr_complex(r, 1).unwrap() - (-r).exp()).abs() < 1e-15);
        }
        // 1 - (1 - 1/256)^256, mpmath
        let v = ccdf_papr_complex(256f64.ln(), 256).unwrap();
        assert!((v - 0.632_840_245_108_463_7).abs() < 1e-14);
        assert!(ccdf_papr_complex(-1.0f64, 4).is_err());
    }

    #[test]
    fn real_ccdf_edges() {
        assert_eq!(ccdf_papr_real(0.0f64, 128).unwrap(), 1.0);
        for r in [0.3f64, 2.0, 9.0, 30.0] {
            let two_sided = 2.0 * normal::sf(r.sqrt());
            assert!((ccdf_papr_real(r, 1).unwrap() - two_sided).abs() <= 1e-15 * two_sided.max(1e-300));
        }
        assert!(ccdf_papr_real(-0.1f64, 4).is_err());
    }

    #[test]
    fn upper_ccdf_edges() {
        assert!((ccdf_upapr(0.0f64, 4).unwrap() - 0.9375).abs() < 1e-15);
        for r in [0.5f64, 4.0, 40.0] {
            let q = normal::sf(r.sqrt());
            assert!((ccdf_upapr(r, 1).unwrap() - q).abs() <= 1e-14 * q);
            assert_eq!(ccdf_lpapr(r, 7).unwrap(), ccdf_upapr(r, 7).unwrap());
        }
        assert!(ccdf_upapr(-1.0f64, 4).is_err());
        assert!(ccdf_upapr(1.0f64, 0).is_err());
    }

    #[test]
    fn joint_cdf_marginals_and_diagonal() {
        for n in [16usize, 128, 1024] {
            for r in [2.0f64, 6.0, 12.0, 20.0] {
                let m = 1.0 - joint_cdf(1e9, r, n).unwrap();
                assert!((m - ccdf_upapr(r, n).unwrap()).abs() < 1e-12);
                let d = 1.0 - joint_cdf(r, r, n).unwrap();
                assert!((d - ccdf_papr_real(r, n).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn joint_cdf_is_symmetric() {
        for (a, b) in [(1.0f64, 4.0), (0.2, 9.0), (7.0, 3.0)] {
            let x = joint_cdf(a, b, 64).unwrap();
            let y = joint_cdf(b, a, 64).unwrap();
            assert!((x - y).abs() <= 1e-15 * x.max(1e-300));
        }
    }

    #[test]
    fn pdf_matches_mixed_difference_at_reference_point() {
        let (a, b, n, h) = (2.0f64, 3.0, 16usize, 1e-4);
        let f = |x, y| joint_cdf(x, y, n).unwrap();
        let fd = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4.0 * h * h);
        let pdf = joint_pdf(a, b, n).unwrap();
        assert!(((fd - pdf) / pdf).abs() < 1e-4, "{fd} vs {pdf}");
    }

    #[test]
    fn pdf_domain() {
        assert!(joint_pdf(0.0f64, 1.0, 8).is_err());
        assert!(joint_pdf(1.0f64, 1.0, 1).is_err());
        assert!(joint_pdf(1.0f64, 1.0, 2).is_ok());
    }

    #[test]
    fn violation_probability_limits() {
        assert!(violation_probability(1e-12f64, 0.3, 128).unwrap() > 1.0 - 1e-9);
        for gamma in [4.0f64, 40.0, 120.0] {
            let half = violation_probability(gamma, 0.5, 256).unwrap();
            let two_sided = 1.0 - (1.0 - 2.0 * normal::sf((gamma / 4.0).sqrt())).powi(256);
            assert!((half - two_sided).abs() < 1e-12);
            assert!((half - ccdf_papr_real(gamma / 4.0, 256).unwrap()).abs() < 1e-15);
        }
        assert!(violation_probability(10.0f64, 0.6, 8).is_err());
        assert!(violation_probability(0.0f64, 0.2, 8).is_err());
    }

    #[test]
    fn required_backoff_inverts_violation_probability() {
        for s in [0.1f64, 0.3, 0.5] {
            let g = required_backoff(1e-2, s, 1024).unwrap();
            assert!((violation_probability(g, s, 1024).unwrap() - 1e-2).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_ccdf_survives_large_n() {
        // below ~7.6 dB the true value is within 1e-16 of 1 and rounds to 1
        let mut prev = 1.0;
        for i in 0..=80 {
            let r = 10f64.powf((8.0 + 0.1 * i as f64) / 10.0);
            let p = ccdf_upapr(r, 4096).unwrap();
            assert!(p > 0.0 && p < 1.0 && p < prev, "r={r} p={p}");
            prev = p;
        }
    }
}
