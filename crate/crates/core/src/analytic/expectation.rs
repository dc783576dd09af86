//! Expectations over the joint (LPAPR, UPAPR) law by nested adaptive quadrature.
//!
//! Integrals are taken in square-root coordinates `t = sqrt r` on
//! `[0, tail_cut]^2`, where the density is bounded (see
//! [`joint_density_sqrt`](super::joint_density_sqrt)).

use std::cell::RefCell;

use super::distributions::check_biasing_ratio;
use super::normal;
use super::quadrature::{integrate, Estimate, Tolerance};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Quadrature settings for joint-law expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEvalConfig {
    /// Relative tolerance of the outer integral; inner integrals run 100x tighter.
    pub rel_tol: f64,
    /// Panel budget for each one-dimensional integral.
    pub max_subdivisions: usize,
    /// Upper integration limit in `t = sqrt r`.
    pub tail_cut: f64,
}

impl Default for JointEvalConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_subdivisions: 2000,
            tail_cut: 10.0,
        }
    }
}

impl JointEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("rel_tol must be positive".into()));
        }
        if !(self.tail_cut >= 6.0) {
            return Err(Error::InvalidArgument("tail_cut must be at least 6".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    fn outer(&self) -> Tolerance {
        Tolerance {
            rel_tol: self.rel_tol,
            abs_tol: 0.0,
            max_panels: self.max_subdivisions,
        }
    }

    fn inner(&self) -> Tolerance {
        Tolerance {
            rel_tol: self.rel_tol * 1e-2,
            abs_tol: 0.0,
            max_panels: self.max_subdivisions,
        }
    }
}

/// `int_0^cut int_0^cut phi(t_l) phi(t_u) n(n-1) [Phi(t_u) - Phi(-t_l)]^(n-2) h(t_l, t_u) dt_l dt_u`
///
/// `inner_split(t_u)` may name one interior point of the inner axis where
/// `h` has a kink.
fn nested<T, H, S>(n: usize, cfg: &JointEvalConfig, h: H, inner_split: S) -> Result<Estimate<T>>
where
    T: Real,
    H: Fn(T, T) -> T,
    S: Fn(T) -> Option<T>,
{
    cfg.validate()?;
    let cut = T::lit(cfg.tail_cut);
    let nf = T::of_usize(n);
    let power = T::of_usize(n - 2);
    let inner_failure: RefCell<Option<Error>> = RefCell::new(None);

    let outer = |t_u: T| -> T {
        let q_u = normal::sf(t_u);
        let integrand = |t_l: T| {
            let ln_base = (-(normal::sf(t_l) + q_u)).ln_1p();
            normal::pdf(t_l) * (power * ln_base).exp() * h(t_l, t_u)
        };
        let mut pts = vec![T::zero()];
        if let Some(s) = inner_split(t_u).filter(|&s| s > T::zero() && s < cut) {
            pts.push(s);
        }
        pts.push(cut);
        match integrate(integrand, &pts, cfg.inner()) {
            Ok(e) => normal::pdf(t_u) * nf * (nf - T::one()) * e.value,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                T::nan()
            }
        }
    };
    let result = integrate(outer, &[T::zero(), cut], cfg.outer());
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    result
}

/// Mass of the joint density over `(0, tail_cut^2]^2`.
///
/// The density lives on the quadrant where the symbol has samples of both
/// signs, so the full mass is `1 - 2^(1-n)`.
pub fn joint_pdf_mass<T: Real>(n: usize, cfg: &JointEvalConfig) -> Result<Estimate<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    nested(n, cfg, |_, _| T::one(), |_| None)
}

/// `E[min{upper_weight / U, lower_weight / L}]` under the joint density.
pub fn expected_min_ratio<T: Real>(
    upper_weight: T,
    lower_weight: T,
    n: usize,
    cfg: &JointEvalConfig,
) -> Result<T> {
    if !(upper_weight > T::zero() && lower_weight > T::zero()) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "the expectation diverges at the origin for N < 4, got {n}"
        )));
    }
    // min switches branch on the line t_l = t_u * sqrt(lower / upper)
    let slope = (lower_weight / upper_weight).sqrt();
    let h = |t_l: T, t_u: T| (upper_weight / (t_u * t_u)).min(lower_weight / (t_l * t_l));
    Ok(nested(n, cfg, h, |t_u| Some(t_u * slope))?.value)
}

/// Output variance under symbol-variant scaling:
/// `D^2 E[min{(1 - varsigma)^2 / U, varsigma^2 / L}]`.
pub fn symbol_variant_variance<T: Real>(
    varsigma: T,
    n: usize,
    dynamic_range: T,
    cfg: &JointEvalConfig,
) -> Result<T> {
    check_biasing_ratio(varsigma)?;
    if varsigma == T::zero() {
        return Err(Error::InvalidArgument(
            "biasing ratio 0 forces a zero scaling factor".into(),
        ));
    }
    if !(dynamic_range > T::zero()) {
        return Err(Error::InvalidArgument("dynamic range must be positive".into()));
    }
    let upper = (T::one() - varsigma).powi(2);
    let lower = varsigma * varsigma;
    Ok(dynamic_range * dynamic_range * expected_min_ratio(upper, lower, n, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::joint_cdf;

    #[test]
    fn mass_matches_closed_form() {
        let cfg = JointEvalConfig::default();
        for n in [4usize, 16, 128, 1024] {
            let est: Estimate<f64> = joint_pdf_mass(n, &cfg).unwrap();
            // F(c,c) - F(0,c) - F(c,0) + F(0,0) with F the joint CDF
            let c = cfg.tail_cut * cfg.tail_cut;
            let exact = joint_cdf(c, c, n).unwrap() - 2.0 * joint_cdf(0.0, c, n).unwrap();
            assert!((est.value - exact).abs() < 1e-8 * exact, "N={n}: {} vs {exact}", est.value);
            let expect = 1.0 - 2f64.powi(1 - n as i32);
            assert!((est.value - expect).abs() < 1e-8, "N={n}");
        }
    }

    #[test]
    fn expectation_is_symmetric_in_weights() {
        let cfg = JointEvalConfig::default();
        for (a, b) in [(0.49f64, 0.09), (0.81, 0.01)] {
            let x = expected_min_ratio(a, b, 128, &cfg).unwrap();
            let y = expected_min_ratio(b, a, 128, &cfg).unwrap();
            assert!(((x - y) / x).abs() < 1e-7, "{x} vs {y}");
        }
    }

    #[test]
    fn variance_domain() {
        let cfg = JointEvalConfig::default();
        assert!(symbol_variant_variance(0.0f64, 128, 1.0, &cfg).is_err());
        assert!(symbol_variant_variance(0.6f64, 128, 1.0, &cfg).is_err());
        assert!(symbol_variant_variance(0.3f64, 3, 1.0, &cfg).is_err());
        assert!(symbol_variant_variance(0.3f64, 128, 0.0, &cfg).is_err());
        let bad = JointEvalConfig {
            tail_cut: 5.0,
            ..cfg
        };
        assert!(symbol_variant_variance(0.3f64, 128, 1.0, &bad).is_err());
    }

    #[test]
    fn variance_scales_with_dynamic_range_squared() {
        let cfg = JointEvalConfig::default();
        let one = symbol_variant_variance(0.4f64, 64, 1.0, &cfg).unwrap();
        let three = symbol_variant_variance(0.4f64, 64, 3.0, &cfg).unwrap();
        assert!((three / one - 9.0).abs() < 1e-12);
    }

    #[test]
    fn variance_non_decreasing_in_biasing_ratio() {
        let cfg = JointEvalConfig::default();
        let mut prev = 0.0;
        for i in 1..=10 {
            let v = symbol_variant_variance(0.05 * i as f64, 128, 1.0, &cfg).unwrap();
            assert!(v >= prev, "at {}", 0.05 * i as f64);
            prev = v;
        }
    }

    #[test]
    fn starved_budget_surfaces_non_convergence() {
        let cfg = JointEvalConfig {
            max_subdivisions: 2,
            ..Default::default()
        };
        assert!(matches!(
            symbol_variant_variance(0.5f64, 1024, 1.0, &cfg),
            Err(Error::NonConvergence { .. })
        ));
    }
}
