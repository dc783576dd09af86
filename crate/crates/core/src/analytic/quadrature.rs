//! Globally adaptive Gauss-Kronrod (10/21-point) integration on finite intervals.

use crate::error::{Error, Result};
use crate::scalar::Real;

// Kronrod abscissae on [-1, 1] (positive half, descending, centre last).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208984957600,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the embedded abscissae XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Integral estimate with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    /// Number of panels in the final partition.
    pub panels: usize,
}

/// Stopping rule: converged when `error <= max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod21<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = (b - a) / T::lit(2.0);
    let centre = (a + b) / T::lit(2.0);
    let fc = f(centre);
    let mut kron = fc * T::lit(WGK[10]);
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(centre - dx) + f(centre + dx);
        kron += T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    let value = kron * half;
    let mut error = ((kron - gauss) * half).abs();
    // |K - G| cannot resolve below round-off of the panel sum
    let floor = T::epsilon() * T::lit(50.0) * value.abs();
    if error < floor {
        error = floor;
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over the partition `[p0, p1] U [p1, p2] U ...` given by
/// `breakpoints`, bisecting the panel with the largest error until the
/// tolerance is met.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    breakpoints: &[T],
    tol: Tolerance,
) -> Result<Estimate<T>> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidArgument("breakpoints must be ascending and at least two".into()));
    }
    let mut panels: Vec<Panel<T>> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod21(&mut f, w[0], w[1]))
        .collect();
    if panels.is_empty() {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            panels: 0,
        });
    }
    let rel = T::lit(tol.rel_tol);
    let abs = T::lit(tol.abs_tol);
    loop {
        let value: T = panels.iter().map(|p| p.value).sum();
        let error: T = panels.iter().map(|p| p.error).sum();
        if error <= abs.max(rel * value.abs()) {
            return Ok(Estimate {
                value,
                error,
                panels: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("non-empty partition");
        let Panel { a, b, .. } = panels[worst];
        let mid = (a + b) / T::lit(2.0);
        let unsplittable = !(mid > a && mid < b) || error.is_nan();
        if panels.len() >= tol.max_panels || unsplittable {
            return Err(Error::NonConvergence {
                estimate: value.to_f64().unwrap_or(f64::NAN),
                error: error.to_f64().unwrap_or(f64::NAN),
                subdivisions: panels.len(),
            });
        }
        panels[worst] = kronrod21(&mut f, a, mid);
        panels.insert(worst + 1, kronrod21(&mut f, mid, b));
    }
}
