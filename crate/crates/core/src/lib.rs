//! Peak-to-average power statistics of real-valued OFDM for visible light
//! communication.
//!
//! The crate synthesizes Hermitian-symmetric OFDM symbols, measures their
//! upper and lower PAPR, evaluates the closed-form marginal and joint laws of
//! those peaks, and models the LED front end (scaling and biasing into a
//! dynamic range) both analytically and by Monte Carlo.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar for everyday use.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
mod error;
pub mod ofdm;
pub mod rng;
pub mod scaling;
mod scalar;
pub mod selftest;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Constellation = ofdm::Constellation<f64>;
pub type FrequencyFrame = ofdm::FrequencyFrame<f64>;
pub type TimeSymbol = ofdm::TimeSymbol<f64>;
pub type SymbolSource = ofdm::SymbolSource<f64>;
pub type PeakTriple = stats::PeakTriple<f64>;
pub type CcdfCurve = stats::CcdfCurve<f64>;
pub type BiasScalePlan = scaling::BiasScalePlan<f64>;
pub type DriveSymbol = scaling::DriveSymbol<f64>;

pub type ConstellationF32 = ofdm::Constellation<f32>;
pub type FrequencyFrameF32 = ofdm::FrequencyFrame<f32>;
pub type TimeSymbolF32 = ofdm::TimeSymbol<f32>;
pub type SymbolSourceF32 = ofdm::SymbolSource<f32>;
pub type PeakTripleF32 = stats::PeakTriple<f32>;
pub type CcdfCurveF32 = stats::CcdfCurve<f32>;
pub type BiasScalePlanF32 = scaling::BiasScalePlan<f32>;
pub type DriveSymbolF32 = scaling::DriveSymbol<f32>;
