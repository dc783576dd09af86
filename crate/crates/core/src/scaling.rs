//! LED front end: linear scaling and biasing into the dynamic range `[I_L, I_H]`.

use crate::error::{Error, Result};
use crate::ofdm::{Constellation, SymbolSource, TimeSymbol};
use crate::scalar::Real;
use crate::stats::{extremes, peak_triple};

/// How the scaling factor is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingMode<T> {
    /// One scaling factor for all symbols, set by the power back-off
    /// `gamma = D^2 / (alpha^2 sigma_x^2)` (linear ratio).
    FixedBackoff { gamma: T },
    /// Largest per-symbol factor that keeps the symbol inside the range.
    SymbolVariant,
}

/// Dynamic range, bias level and scaling mode of the LED drive.
///
/// A plan whose biasing ratio exceeds 1/2 is stored reflected: symbols are
/// processed at the mirrored bias `I_H + I_L - B` and the drive is mapped
/// back through `s = I_H + I_L - y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasScalePlan<T> {
    i_low: T,
    i_high: T,
    bias: T,
    mode: ScalingMode<T>,
    reflected: bool,
}

impl<T: Real> BiasScalePlan<T> {
    pub fn new(i_low: T, i_high: T, bias: T, mode: ScalingMode<T>) -> Result<Self> {
        if !(i_low >= T::zero()) {
            return Err(Error::InvalidPlan(format!("turn-on current must be non-negative, got {i_low}")));
        }
        if !(i_high > i_low) {
            return Err(Error::InvalidPlan(format!("need I_H > I_L, got [{i_low}, {i_high}]")));
        }
        if !(bias > i_low && bias < i_high) {
            return Err(Error::InvalidPlan(format!(
                "bias {bias} must lie strictly inside [{i_low}, {i_high}]"
            )));
        }
        if let ScalingMode::FixedBackoff { gamma } = mode {
            if !(gamma > T::zero() && gamma.is_finite()) {
                return Err(Error::InvalidPlan(format!("back-off must be positive, got {gamma}")));
            }
        }
        let half = (i_low + i_high) / T::lit(2.0);
        Ok(Self {
            i_low,
            i_high,
            bias,
            mode,
            reflected: bias > half,
        })
    }

    /// Plan on the normalized range `[0, 1]` with bias equal to `varsigma`.
    pub fn normalized(varsigma: T, mode: ScalingMode<T>) -> Result<Self> {
        Self::new(T::zero(), T::one(), varsigma, mode)
    }

    pub fn i_low(&self) -> T {
        self.i_low
    }

    pub fn i_high(&self) -> T {
        self.i_high
    }

    /// Requested bias level `B`.
    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn mode(&self) -> ScalingMode<T> {
        self.mode
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    /// `D = I_H - I_L`.
    pub fn dynamic_range(&self) -> T {
        self.i_high - self.i_low
    }

    /// Biasing ratio `(B - I_L) / D` of the requested bias, in `(0, 1)`.
    pub fn requested_biasing_ratio(&self) -> T {
        (self.bias - self.i_low) / self.dynamic_range()
    }

    /// Biasing ratio the symbols are processed at, in `(0, 1/2]`.
    pub fn biasing_ratio(&self) -> T {
        (self.working_bias() - self.i_low) / self.dynamic_range()
    }

    fn working_bias(&self) -> T {
        if self.reflected {
            self.i_high + self.i_low - self.bias
        } else {
            self.bias
        }
    }

    /// Fixed scaling factor `D / (sqrt(gamma) sigma_x)`; `None` in symbol-variant mode.
    pub fn fixed_alpha(&self, sigma2: T) -> Option<T> {
        match self.mode {
            ScalingMode::FixedBackoff { gamma } => Some(self.dynamic_range() / (gamma.sqrt() * sigma2.sqrt())),
            ScalingMode::SymbolVariant => None,
        }
    }
}

/// Scaled and biased symbol as it drives the LED.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSymbol<T> {
    pub y: Vec<T>,
    /// Scaling factor applied to the time samples.
    pub alpha: T,
    pub clipped: bool,
    /// Samples outside `[I_L, I_H]` before any saturation.
    pub clip_count: usize,
}

impl<T: Real> DriveSymbol<T> {
    /// Hard-clamps the drive into `[i_low, i_high]`. Not part of the
    /// exceedance statistics, which are measured before saturation.
    pub fn saturate(&mut self, i_low: T, i_high: T) {
        for v in &mut self.y {
            *v = v.max(i_low).min(i_high);
        }
    }
}

fn alpha_from_extremes<T: Real>(hi: T, lo: T, i_low: T, i_high: T, bias: T) -> Result<T> {
    if !(hi > T::zero() && lo < T::zero()) {
        return Err(Error::SingleSignedSymbol);
    }
    Ok(((i_high - bias) / hi).min((i_low - bias) / lo))
}

/// Greatest scaling factor keeping `alpha x[n] + B` inside `[I_L, I_H]`:
/// `min{(I_H - B) / max x, (I_L - B) / min x}`.
pub fn greatest_alpha<T: Real>(sym: &TimeSymbol<T>, plan: &BiasScalePlan<T>) -> Result<T> {
    let x = sym.real_samples()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty symbol".into()));
    }
    let (hi, lo) = extremes(x);
    alpha_from_extremes(hi, lo, plan.i_low, plan.i_high, plan.bias)
}

#[inline]
fn count_outside<T: Real>(x: &[T], alpha: T, bias: T, i_low: T, i_high: T) -> usize {
    x.iter()
        .filter(|&&v| {
            let y = alpha * v + bias;
            y < i_low || y > i_high
        })
        .count()
}

/// Applies `y[n] = alpha x[n] + B`.
///
/// Fixed back-off only detects exceedances; symbol-variant scaling picks the
/// greatest admissible `alpha` and the result is contained in the range.
pub fn scale_and_bias<T: Real>(sym: &TimeSymbol<T>, plan: &BiasScalePlan<T>) -> Result<DriveSymbol<T>> {
    let x = sym.real_samples()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty symbol".into()));
    }
    let bias = plan.working_bias();
    let (alpha, clip_count) = match plan.mode {
        ScalingMode::FixedBackoff { .. } => {
            let alpha = plan.fixed_alpha(sym.sigma2).expect("fixed mode");
            (alpha, count_outside(x, alpha, bias, plan.i_low, plan.i_high))
        }
        ScalingMode::SymbolVariant => {
            let (hi, lo) = extremes(x);
            (alpha_from_extremes(hi, lo, plan.i_low, plan.i_high, bias)?, 0)
        }
    };
    let contain = matches!(plan.mode, ScalingMode::SymbolVariant);
    let y = x
        .iter()
        .map(|&v| {
            let mut y = alpha * v + bias;
            if contain {
                // absorbs the last-ulp overshoot of the boundary sample
                y = y.max(plan.i_low).min(plan.i_high);
            }
            if plan.reflected {
                plan.i_high + plan.i_low - y
            } else {
                y
            }
        })
        .collect();
    Ok(DriveSymbol {
        y,
        alpha,
        clipped: clip_count > 0,
        clip_count,
    })
}

/// Number of symbols, out of `symbols`, that leave the range under each
/// fixed-back-off plan. All plans see the same symbol stream.
pub fn violation_counts_mc<T: Real>(
    plans: &[BiasScalePlan<T>],
    n: usize,
    qam_order: usize,
    symbols: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if plans.iter().any(|p| matches!(p.mode, ScalingMode::SymbolVariant)) {
        return Err(Error::InvalidPlan(
            "symbol-variant plans never leave the range; violation rate needs fixed back-off".into(),
        ));
    }
    let source = SymbolSource::new(n, Constellation::new(qam_order)?, seed, true)?;
    let sigma2 = source.sigma2();
    let alphas: Vec<T> = plans.iter().map(|p| p.fixed_alpha(sigma2).expect("fixed mode")).collect();
    source.fold(
        symbols,
        || vec![0u64; plans.len()],
        |acc, sym| {
            let x = sym.real_samples().expect("hermitian source");
            for ((count, plan), &alpha) in acc.iter_mut().zip(plans).zip(&alphas) {
                if count_outside(x, alpha, plan.working_bias(), plan.i_low, plan.i_high) > 0 {
                    *count += 1;
                }
            }
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
    )
}

/// Fraction of `symbols` generated symbols that leave the range under a
/// fixed-back-off plan.
pub fn violation_rate_mc<T: Real>(
    plan: &BiasScalePlan<T>,
    n: usize,
    qam_order: usize,
    symbols: u64,
    seed: u64,
) -> Result<T> {
    let count = violation_counts_mc(std::slice::from_ref(plan), n, qam_order, symbols, seed)?[0];
    Ok(T::lit(count as f64) / T::lit(symbols as f64))
}

/// Monte Carlo `sigma_y^2` under symbol-variant scaling for every biasing
/// ratio in `varsigmas`, from one symbol stream:
/// `D^2 mean_i min{(1 - varsigma)^2 / U_i, varsigma^2 / L_i}`.
pub fn variance_mc_sweep<T: Real>(
    varsigmas: &[T],
    n: usize,
    qam_order: usize,
    symbols: u64,
    seed: u64,
    dynamic_range: T,
) -> Result<Vec<T>> {
    if symbols < 1000 {
        return Err(Error::InvalidArgument(format!("need at least 1000 symbols, got {symbols}")));
    }
    if let Some(s) = varsigmas.iter().find(|&&s| !(s > T::zero() && s < T::one())) {
        return Err(Error::InvalidArgument(format!("biasing ratio must lie in (0, 1), got {s}")));
    }
    let source = SymbolSource::new(n, Constellation::new(qam_order)?, seed, true)?;
    let weights: Vec<(T, T)> = varsigmas
        .iter()
        .map(|&s| ((T::one() - s).powi(2), s * s))
        .collect();
    let sums = source.fold(
        symbols,
        || vec![T::zero(); weights.len()],
        |acc, sym| {
            let p = peak_triple(sym).expect("hermitian source");
            for (sum, &(upper, lower)) in acc.iter_mut().zip(&weights) {
                // a zero peak makes its branch infinite, so min picks the other
                *sum += (upper / p.upapr).min(lower / p.lpapr);
            }
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
    )?;
    let scale = dynamic_range * dynamic_range / T::lit(symbols as f64);
    Ok(sums.into_iter().map(|s| s * scale).collect())
}

/// Monte Carlo `sigma_y^2` under symbol-variant scaling at one biasing ratio.
pub fn variance_mc<T: Real>(
    varsigma: T,
    n: usize,
    qam_order: usize,
    symbols: u64,
    seed: u64,
    dynamic_range: T,
) -> Result<T> {
    Ok(variance_mc_sweep(&[varsigma], n, qam_order, symbols, seed, dynamic_range)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(x: &[f64]) -> TimeSymbol<f64> {
        TimeSymbol::real(x.to_vec(), 1.0)
    }

    #[test]
    fn greatest_alpha_direct() {
        let plan = BiasScalePlan::new(0.0, 10.0, 4.0, ScalingMode::SymbolVariant).unwrap();
        assert_eq!(greatest_alpha(&sym(&[-1.0, 2.0]), &plan).unwrap(), 3.0);
    }

    #[test]
    fn greatest_alpha_symmetric_midpoint() {
        let plan = BiasScalePlan::new(1.0, 5.0, 3.0, ScalingMode::SymbolVariant).unwrap();
        let a = greatest_alpha(&sym(&[-0.5, 0.25, 0.5, -0.1]), &plan).unwrap();
        assert_eq!(a, 2.0 / 0.5);
    }

    #[test]
    fn greatest_alpha_errors() {
        let plan = BiasScalePlan::new(0.0, 1.0, 0.5, ScalingMode::SymbolVariant).unwrap();
        assert_eq!(greatest_alpha(&sym(&[0.0, 1.0]), &plan), Err(Error::SingleSignedSymbol));
        assert_eq!(greatest_alpha(&sym(&[-1.0, -2.0]), &plan), Err(Error::SingleSignedSymbol));
        assert!(BiasScalePlan::new(0.0, 1.0, 1.0, ScalingMode::<f64>::SymbolVariant).is_err());
        assert!(BiasScalePlan::new(0.0, 1.0, 0.0, ScalingMode::<f64>::SymbolVariant).is_err());
        assert!(BiasScalePlan::new(2.0, 1.0, 1.5, ScalingMode::<f64>::SymbolVariant).is_err());
        assert!(BiasScalePlan::new(0.0, 1.0, 0.5, ScalingMode::FixedBackoff { gamma: 0.0 }).is_err());
    }

    #[test]
    fn exact_fit_symbol_variant() {
        let plan = BiasScalePlan::new(0.0, 2.0, 1.0, ScalingMode::SymbolVariant).unwrap();
        let d = scale_and_bias(&sym(&[-1.0, 1.0]), &plan).unwrap();
        assert_eq!(d.alpha, 1.0);
        assert_eq!(d.y, vec![0.0, 2.0]);
        assert!(!d.clipped);
    }

    #[test]
    fn fixed_backoff_counts_without_saturating() {
        // D = 2 and sigma2 = 1 give alpha = 1 at gamma = 4
        let plan = BiasScalePlan::new(0.0, 2.0, 1.0, ScalingMode::FixedBackoff { gamma: 4.0 }).unwrap();
        let mut d = scale_and_bias(&sym(&[-3.0, 0.0, 3.0]), &plan).unwrap();
        assert_eq!(d.alpha, 1.0);
        assert_eq!(d.clip_count, 2);
        assert!(d.clipped);
        assert_eq!(d.y, vec![-2.0, 1.0, 4.0]);
        d.saturate(plan.i_low(), plan.i_high());
        assert_eq!(d.y, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn backoff_identity() {
        for gamma in [0.5f64, 10.0, 1234.5] {
            let plan = BiasScalePlan::new(0.2, 1.7, 0.6, ScalingMode::FixedBackoff { gamma }).unwrap();
            let sigma2 = 126.0 / 128.0;
            let a = plan.fixed_alpha(sigma2).unwrap();
            let back = plan.dynamic_range().powi(2) / (a * a * sigma2);
            assert!(((back - gamma) / gamma).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_flags_and_ratios() {
        let plan = BiasScalePlan::new(1.0, 3.0, 2.6, ScalingMode::<f64>::SymbolVariant).unwrap();
        assert!(plan.is_reflected());
        assert!((plan.requested_biasing_ratio() - 0.8).abs() < 1e-15);
        assert!((plan.biasing_ratio() - 0.2).abs() < 1e-15);
        let d = scale_and_bias(&sym(&[-1.0, 0.5, 2.0]), &plan).unwrap();
        assert!(d.y.iter().all(|&v| (1.0..=3.0).contains(&v)));
        let mean_shift = d.y.iter().sum::<f64>() / 3.0 - 2.6;
        assert!((mean_shift + d.alpha * 0.5).abs() < 1e-12);
    }

    #[test]
    fn violation_rate_rejects_symbol_variant() {
        let plan = BiasScalePlan::normalized(0.3, ScalingMode::SymbolVariant).unwrap();
        assert!(violation_rate_mc(&plan, 64, 4, 10, 1).is_err());
    }

    #[test]
    fn huge_backoff_never_clips() {
        let plan = BiasScalePlan::normalized(0.2, ScalingMode::FixedBackoff { gamma: 1e8 }).unwrap();
        assert_eq!(violation_rate_mc(&plan, 256, 64, 2000, 3).unwrap(), 0.0);
    }

    #[test]
    fn variance_mc_preconditions() {
        assert!(variance_mc(0.3f64, 64, 4, 999, 1, 1.0).is_err());
        assert!(variance_mc(0.0f64, 64, 4, 1000, 1, 1.0).is_err());
        assert!(variance_mc(0.3f64, 64, 4, 1000, 1, 1.0).unwrap() > 0.0);
    }
}
