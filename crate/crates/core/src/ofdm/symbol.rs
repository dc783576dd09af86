use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Time-domain samples of one OFDM symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum Samples<T> {
    /// Output of a Hermitian frame, imaginary residue dropped.
    Real(Vec<T>),
    /// Output of a fully loaded (RF baseline) frame.
    Complex(Vec<Complex<T>>),
}

/// One OFDM symbol together with the ensemble variance used to normalize
/// its peak metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSymbol<T> {
    pub samples: Samples<T>,
    pub sigma2: T,
}

impl<T: Real> TimeSymbol<T> {
    pub fn real(x: Vec<T>, sigma2: T) -> Self {
        Self {
            samples: Samples::Real(x),
            sigma2,
        }
    }

    pub fn complex(x: Vec<Complex<T>>, sigma2: T) -> Self {
        Self {
            samples: Samples::Complex(x),
            sigma2,
        }
    }

    pub fn n(&self) -> usize {
        match &self.samples {
            Samples::Real(x) => x.len(),
            Samples::Complex(x) => x.len(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.samples, Samples::Real(_))
    }

    /// Real samples, or a mode error for complex symbols.
    pub fn real_samples(&self) -> Result<&[T]> {
        match &self.samples {
            Samples::Real(x) => Ok(x),
            Samples::Complex(_) => Err(Error::WrongMode {
                expected: "real",
                hint: "; use complex_papr for complex symbols",
            }),
        }
    }

    pub fn complex_samples(&self) -> Result<&[Complex<T>]> {
        match &self.samples {
            Samples::Complex(x) => Ok(x),
            Samples::Real(_) => Err(Error::WrongMode {
                expected: "complex",
                hint: "; use peak_triple for real symbols",
            }),
        }
    }

    /// Total energy `sum |x[n]|^2`.
    pub fn energy(&self) -> T {
        match &self.samples {
            Samples::Real(x) => x.iter().map(|&v| v * v).sum(),
            Samples::Complex(x) => x.iter().map(|v| v.norm_sqr()).sum(),
        }
    }
}
