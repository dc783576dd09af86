use num_complex::Complex;
use rand::Rng;

use super::constellation::Constellation;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Frequency-domain OFDM frame of `N` subcarrier symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyFrame<T> {
    bins: Vec<Complex<T>>,
    hermitian: bool,
}

/// Checks that `n` is a valid subcarrier count.
pub fn check_subcarriers(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidSubcarriers(n))
    }
}

impl<T: Real> FrequencyFrame<T> {
    /// Wraps explicit bins. A Hermitian frame must have null DC and Nyquist
    /// bins and satisfy `X[k] = conj(X[N-k])`.
    pub fn from_bins(bins: Vec<Complex<T>>, hermitian: bool) -> Result<Self> {
        let n = bins.len();
        check_subcarriers(n)?;
        if hermitian {
            let zero = Complex::new(T::zero(), T::zero());
            if bins[0] != zero || bins[n / 2] != zero {
                return Err(Error::InvalidArgument(
                    "Hermitian frame needs null DC and Nyquist bins".into(),
                ));
            }
            for k in 1..n {
                if bins[k] != bins[n - k].conj() {
                    return Err(Error::InvalidArgument(format!(
                        "bin {k} is not the conjugate of bin {}",
                        n - k
                    )));
                }
            }
        }
        Ok(Self { bins, hermitian })
    }

    /// Draws a random frame.
    ///
    /// Hermitian frames draw bins `1..N/2` uniformly from the constellation
    /// and mirror conjugates into the upper half; otherwise all `N` bins are
    /// drawn independently.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        constellation: &Constellation<T>,
        rng: &mut R,
        hermitian: bool,
    ) -> Result<Self> {
        check_subcarriers(n)?;
        let mut bins = vec![Complex::new(T::zero(), T::zero()); n];
        fill_random(&mut bins, constellation, rng, hermitian);
        Ok(Self { bins, hermitian })
    }

    pub fn n(&self) -> usize {
        self.bins.len()
    }

    pub fn bins(&self) -> &[Complex<T>] {
        &self.bins
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Ensemble time-domain variance for unit-energy data: `(N-2)/N` for
    /// Hermitian frames (two null bins), `1` for fully loaded frames.
    pub fn ensemble_variance(&self) -> T {
        ensemble_variance(self.n(), self.hermitian)
    }
}

pub(crate) fn ensemble_variance<T: Real>(n: usize, hermitian: bool) -> T {
    if hermitian {
        T::of_usize(n - 2) / T::of_usize(n)
    } else {
        T::one()
    }
}

/// Fills `bins` in place with a random frame; `bins.len()` must be valid.
pub(crate) fn fill_random<T: Real, R: Rng + ?Sized>(
    bins: &mut [Complex<T>],
    constellation: &Constellation<T>,
    rng: &mut R,
    hermitian: bool,
) {
    let n = bins.len();
    let m = constellation.order();
    if hermitian {
        let zero = Complex::new(T::zero(), T::zero());
        bins[0] = zero;
        bins[n / 2] = zero;
        for k in 1..n / 2 {
            let p = constellation.point(rng.random_range(0..m));
            bins[k] = p;
            bins[n - k] = p.conj();
        }
    } else {
        for b in bins.iter_mut() {
            *b = constellation.point(rng.random_range(0..m));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn hermitian_layout_n8() {
        let c = Constellation::<f64>::new(64).unwrap();
        let f = FrequencyFrame::random(8, &c, &mut substream(1, 0), true).unwrap();
        let x = f.bins();
        assert_eq!(x[0], Complex::new(0.0, 0.0));
        assert_eq!(x[4], Complex::new(0.0, 0.0));
        assert_eq!(x[5], x[3].conj());
        assert_eq!(x[6], x[2].conj());
        assert_eq!(x[7], x[1].conj());
        assert!(FrequencyFrame::from_bins(x.to_vec(), true).is_ok());
    }

    #[test]
    fn same_seed_same_frame() {
        let c = Constellation::<f64>::new(256).unwrap();
        let a = FrequencyFrame::random(64, &c, &mut substream(99, 5), true).unwrap();
        let b = FrequencyFrame::random(64, &c, &mut substream(99, 5), true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_sizes() {
        let c = Constellation::<f64>::new(4).unwrap();
        for n in [0, 4, 12, 100] {
            assert_eq!(
                FrequencyFrame::random(n, &c, &mut substream(0, 0), true),
                Err(Error::InvalidSubcarriers(n))
            );
        }
    }

    #[test]
    fn from_bins_checks_symmetry() {
        let mut bins = vec![Complex::new(0.0, 0.0); 8];
        bins[1] = Complex::new(1.0, 1.0);
        assert!(FrequencyFrame::from_bins(bins.clone(), true).is_err());
        bins[7] = Complex::new(1.0, -1.0);
        assert!(FrequencyFrame::from_bins(bins.clone(), true).is_ok());
        bins[0] = Complex::new(1.0, 0.0);
        assert!(FrequencyFrame::from_bins(bins, true).is_err());
    }
}
