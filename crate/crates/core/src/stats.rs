//! Per-symbol peak metrics and empirical CCDF estimation.

use crate::error::{Error, Result};
use crate::ofdm::TimeSymbol;
use crate::scalar::Real;

/// Peak metrics of one real-valued symbol, all normalized by `sigma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakTriple<T> {
    /// `max x[n]^2 / sigma2`
    pub papr: T,
    /// `(max x[n])^2 / sigma2`
    pub upapr: T,
    /// `(min x[n])^2 / sigma2`
    pub lpapr: T,
}

/// Largest and smallest sample of a non-empty slice.
pub(crate) fn extremes<T: Real>(x: &[T]) -> (T, T) {
    x.iter().fold((T::neg_infinity(), T::infinity()), |(hi, lo), &v| {
        (hi.max(v), lo.min(v))
    })
}

/// Upper, lower and two-sided PAPR of a real-mode symbol.
pub fn peak_triple<T: Real>(sym: &TimeSymbol<T>) -> Result<PeakTriple<T>> {
    let x = sym.real_samples()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty symbol".into()));
    }
    if !(sym.sigma2 > T::zero()) {
        return Err(Error::InvalidArgument("sigma2 must be positive".into()));
    }
    let (hi, lo) = extremes(x);
    let upapr = hi * hi / sym.sigma2;
    let lpapr = lo * lo / sym.sigma2;
    Ok(PeakTriple {
        papr: upapr.max(lpapr),
        upapr,
        lpapr,
    })
}

/// `max |x[n]|^2 / sigma2` of a complex-mode symbol.
pub fn complex_papr<T: Real>(sym: &TimeSymbol<T>) -> Result<T> {
    let x = sym.complex_samples()?;
    let peak = x.iter().fold(T::zero(), |m, v| m.max(v.norm_sqr()));
    Ok(peak / sym.sigma2)
}

/// Whether a curve was counted from samples or evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Empirical,
    Analytic,
}

/// `(threshold, Pr{value > threshold})` pairs on a linear-ratio axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfCurve<T> {
    pub thresholds: Vec<T>,
    pub probabilities: Vec<T>,
    /// Number of values counted; 0 for analytic curves.
    pub samples: u64,
    pub kind: CurveKind,
}

impl<T: Real> CcdfCurve<T> {
    /// Evaluates `ccdf` at every threshold.
    pub fn analytic<F: Fn(T) -> T>(thresholds: &[T], ccdf: F) -> Self {
        Self {
            thresholds: thresholds.to_vec(),
            probabilities: thresholds.iter().map(|&t| ccdf(t)).collect(),
            samples: 0,
            kind: CurveKind::Analytic,
        }
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}

fn check_thresholds<T: Real>(thresholds: &[T]) -> Result<()> {
    if thresholds.iter().any(|t| t.is_nan()) || thresholds.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("thresholds must be ascending".into()));
    }
    Ok(())
}

/// Streaming exceedance counter behind [`empirical_ccdf`].
///
/// Counts are exact. Two counters over the same thresholds merge by adding
/// their tallies, in any order.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfCounter<T> {
    thresholds: Vec<T>,
    // bins[p] = number of values exceeding exactly the first p thresholds
    bins: Vec<u64>,
    samples: u64,
}

impl<T: Real> CcdfCounter<T> {
    pub fn new(thresholds: &[T]) -> Result<Self> {
        check_thresholds(thresholds)?;
        Ok(Self {
            thresholds: thresholds.to_vec(),
            bins: vec![0; thresholds.len() + 1],
            samples: 0,
        })
    }

    #[inline]
    pub fn push(&mut self, value: T) {
        let p = self.thresholds.partition_point(|&t| t < value);
        self.bins[p] += 1;
        self.samples += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        debug_assert_eq!(self.thresholds, other.thresholds);
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.samples += other.samples;
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Number of values strictly above each threshold.
    pub fn exceedances(&self) -> Vec<u64> {
        let mut out = vec![0; self.thresholds.len()];
        let mut above = 0;
        for i in (0..self.thresholds.len()).rev() {
            above += self.bins[i + 1];
            out[i] = above;
        }
        out
    }

    pub fn curve(&self) -> Result<CcdfCurve<T>> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("no values were counted".into()));
        }
        let n = T::lit(self.samples as f64);
        Ok(CcdfCurve {
            thresholds: self.thresholds.clone(),
            probabilities: self
                .exceedances()
                .into_iter()
                .map(|c| T::lit(c as f64) / n)
                .collect(),
            samples: self.samples,
            kind: CurveKind::Empirical,
        })
    }
}

/// Empirical CCDF of `values` at `thresholds`, in one pass and constant memory.
pub fn empirical_ccdf<T: Real, I>(values: I, thresholds: &[T]) -> Result<CcdfCurve<T>>
where
    I: IntoIterator<Item = T>,
{
    let mut counter = CcdfCounter::new(thresholds)?;
    for v in values {
        counter.push(v);
    }
    if counter.samples() == 0 {
        return Err(Error::InvalidArgument("value stream is empty".into()));
    }
    counter.curve()
}

/// Binomial standard error `sqrt(p(1-p)/samples)` of an exceedance fraction.
pub fn ccdf_std_error(p: f64, samples: u64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p) && samples >= 1);
    (p * (1.0 - p) / samples as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use proptest::prelude::*;

    #[test]
    fn triple_of_small_vector() {
        let s = TimeSymbol::real(vec![1.0, -2.0, 1.0, 0.0], 1.0);
        let t = peak_triple(&s).unwrap();
        assert_eq!((t.upapr, t.lpapr, t.papr), (1.0, 4.0, 4.0));
    }

    #[test]
    fn triple_of_constant_vector() {
        let s = TimeSymbol::real(vec![0.5; 8], 0.25);
        let t = peak_triple(&s).unwrap();
        assert_eq!(t.upapr, 1.0);
        assert_eq!(t.lpapr, 1.0);
    }

    #[test]
    fn mode_errors() {
        let c = TimeSymbol::complex(vec![Complex::new(1.0, 0.0)], 1.0);
        assert!(matches!(peak_triple(&c), Err(Error::WrongMode { .. })));
        let r = TimeSymbol::real(vec![1.0], 1.0);
        assert!(matches!(complex_papr(&r), Err(Error::WrongMode { .. })));
    }

    #[test]
    fn constant_modulus_has_unit_papr() {
        let x = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(-1.0, 0.0),
            Complex::new(0.0, -1.0),
        ];
        assert_eq!(complex_papr(&TimeSymbol::complex(x, 1.0)).unwrap(), 1.0);
    }

    #[test]
    fn single_tone_has_unit_papr() {
        use crate::ofdm::{idft, FrequencyFrame};
        let mut bins = vec![Complex::new(0.0, 0.0); 16];
        bins[3] = Complex::new(0.6, 0.8);
        let mut s = idft(&FrequencyFrame::from_bins(bins, false).unwrap()).unwrap();
        // one unit-energy bin spreads to |x|^2 = 1/N
        s.sigma2 = 1.0 / 16.0;
        assert!((complex_papr::<f64>(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ccdf_direct_count() {
        let c = empirical_ccdf([1.0, 2.0, 3.0], &[0.0, 2.5, 10.0]).unwrap();
        assert_eq!(c.probabilities, vec![1.0, 1.0 / 3.0, 0.0]);
        assert_eq!(c.samples, 3);
        assert_eq!(c.kind, CurveKind::Empirical);
    }

    #[test]
    fn ccdf_errors() {
        assert!(empirical_ccdf(Vec::<f64>::new(), &[1.0]).is_err());
        assert!(empirical_ccdf([1.0], &[2.0, 1.0]).is_err());
    }

    #[test]
    fn std_error_values() {
        assert!((ccdf_std_error(0.5, 10_000) - 0.005).abs() < 1e-15);
        assert_eq!(ccdf_std_error(0.0, 10), 0.0);
        assert!((ccdf_std_error(0.01, 100_000) - 3.146e-4).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn counter_matches_brute_force_and_is_monotone(
            values in prop::collection::vec(-5.0f64..5.0, 1..200),
            mut thresholds in prop::collection::vec(-6.0f64..6.0, 1..30),
            split in 0usize..200,
        ) {
            thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let curve = empirical_ccdf(values.iter().copied(), &thresholds).unwrap();
            for (t, p) in thresholds.iter().zip(&curve.probabilities) {
                let brute = values.iter().filter(|&&v| v > *t).count() as f64 / values.len() as f64;
                prop_assert_eq!(*p, brute);
            }
            prop_assert!(curve.probabilities.windows(2).all(|w| w[1] <= w[0]));
            // merging split tallies reproduces the single pass
            let k = split.min(values.len());
            let mut a = CcdfCounter::new(&thresholds).unwrap();
            let mut b = CcdfCounter::new(&thresholds).unwrap();
            values[..k].iter().for_each(|&v| a.push(v));
            values[k..].iter().for_each(|&v| b.push(v));
            b.merge(&a);
            prop_assert_eq!(b.curve().unwrap(), curve);
        }
    }
}
