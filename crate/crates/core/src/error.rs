use thiserror::Error;

/// Errors raised by signal synthesis, statistics and the analytic engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported QAM order {0}; allowed orders are 4, 64, 256")]
    UnsupportedOrder(usize),

    #[error("invalid subcarrier count {0}; must be a power of two and at least 8")]
    InvalidSubcarriers(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expected a {expected}-mode symbol{hint}")]
    WrongMode {
        expected: &'static str,
        hint: &'static str,
    },

    #[error("inverse DFT left an imaginary residue of {residue:e} (tolerance {tol:e})")]
    ImaginaryResidue { residue: f64, tol: f64 },

    #[error("symbol is single-signed; the greatest scaling factor is undefined")]
    SingleSignedSymbol,

    #[error("invalid bias plan: {0}")]
    InvalidPlan(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error estimate {error:e})"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
