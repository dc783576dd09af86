//! Closed-form distributions of the peak metrics and the numerics behind them.

mod distributions;
mod expectation;
pub mod normal;
pub mod quadrature;

pub use distributions::{
    ccdf_lpapr, ccdf_papr_complex, ccdf_papr_real, ccdf_upapr, check_biasing_ratio, joint_ccdf_from_tails,
    joint_cdf, joint_cdf_from_tails, joint_density_sqrt, joint_pdf, required_backoff, violation_probability,
};
pub use expectation::{expected_min_ratio, joint_pdf_mass, symbol_variant_variance, JointEvalConfig};
