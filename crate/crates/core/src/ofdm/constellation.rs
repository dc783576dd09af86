use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// QAM orders the synthesis path supports.
pub const SUPPORTED_ORDERS: [usize; 3] = [4, 64, 256];

/// Square QAM constellation normalized to unit average energy.
///
/// `points[label]` is the point carrying bit label `label`. The high half of
/// the label selects the in-phase level and the low half the quadrature
/// level; each half is Gray-coded along its axis, so labels of neighbouring
/// points differ in exactly one bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T> {
    order: usize,
    points: Vec<Complex<T>>,
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = 0;
    while g != 0 {
        b ^= g;
        g >>= 1;
    }
    b
}

impl<T: Real> Constellation<T> {
    /// Builds the unit-energy square QAM of order `order` (4, 64 or 256).
    pub fn new(order: usize) -> Result<Self> {
        if !SUPPORTED_ORDERS.contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        let side = (order as f64).sqrt() as usize;
        let half_bits = side.trailing_zeros();
        // mean of a^2 + b^2 over the odd-integer grid is 2(M - 1)/3
        let scale = T::one() / T::lit(2.0 * (order as f64 - 1.0) / 3.0).sqrt();
        let level = |label: usize| {
            let pos = gray_to_binary(label) as f64;
            T::lit(2.0 * pos - (side as f64 - 1.0)) * scale
        };
        let points = (0..order)
            .map(|label| {
                let i_label = label >> half_bits;
                let q_label = label & (side - 1);
                Complex::new(level(i_label), level(q_label))
            })
            .collect();
        Ok(Self { order, points })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    /// Point carrying bit label `label`.
    #[inline]
    pub fn point(&self, label: usize) -> Complex<T> {
        self.points[label]
    }

    /// Mean of `|point|^2` over the point set.
    pub fn average_energy(&self) -> T {
        self.points.iter().map(|p| p.norm_sqr()).sum::<T>() / T::of_usize(self.order)
    }
}
