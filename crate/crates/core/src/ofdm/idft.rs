//! Unitary inverse DFT, iterative radix-2 decimation in time.

use num_complex::Complex;

use super::frame::{check_subcarriers, FrequencyFrame};
use super::symbol::TimeSymbol;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Precomputed twiddles and bit-reversal permutation for one transform size.
#[derive(Debug, Clone)]
pub struct IdftPlan<T> {
    n: usize,
    // e^{+j 2 pi k / N}, k < N/2
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<u32>,
    scale: T,
}

impl<T: Real> IdftPlan<T> {
    pub fn new(n: usize) -> Result<Self> {
        check_subcarriers(n)?;
        let bits = n.trailing_zeros();
        let twiddles = (0..n / 2)
            .map(|k| {
                // evaluate the angle in f64 so f32 tables are correctly rounded
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Complex::new(T::lit(theta.cos()), T::lit(theta.sin()))
            })
            .collect();
        let bitrev = (0..n as u32)
            .map(|i| i.reverse_bits() >> (32 - bits))
            .collect();
        Ok(Self {
            n,
            twiddles,
            bitrev,
            scale: T::one() / T::of_usize(n).sqrt(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// In-place `x[n] = N^{-1/2} sum_k X[k] e^{+j 2 pi k n / N}`.
    pub fn process(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.n, "buffer length must match the plan");
        for i in 0..self.n {
            let j = self.bitrev[i] as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.n {
            let stride = self.n / (2 * half);
            for start in (0..self.n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }

    /// Transforms a frame into a time symbol. Hermitian frames yield a
    /// real-mode symbol after checking the imaginary residue.
    pub fn transform(&self, frame: &FrequencyFrame<T>) -> Result<TimeSymbol<T>> {
        let mut buf = frame.bins().to_vec();
        let sigma2 = frame.ensemble_variance();
        if frame.is_hermitian() {
            let mut out = Vec::with_capacity(self.n);
            self.transform_real_into(&mut buf, &mut out)?;
            Ok(TimeSymbol::real(out, sigma2))
        } else {
            self.process(&mut buf);
            Ok(TimeSymbol::complex(buf, sigma2))
        }
    }

    /// Transforms Hermitian bins held in `buf` (clobbered) into `out`.
    pub(crate) fn transform_real_into(
        &self,
        buf: &mut [Complex<T>],
        out: &mut Vec<T>,
    ) -> Result<()> {
        self.process(buf);
        let tol = T::imag_residue_tol();
        let residue = buf.iter().fold(T::zero(), |m, v| m.max(v.im.abs()));
        if residue > tol {
            return Err(Error::ImaginaryResidue {
                residue: residue.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.clear();
        out.extend(buf.iter().map(|v| v.re));
        Ok(())
    }
}

/// Unitary inverse DFT of a frame (plans a transform for this call only).
pub fn idft<T: Real>(frame: &FrequencyFrame<T>) -> Result<TimeSymbol<T>> {
    IdftPlan::new(frame.n())?.transform(frame)
}
