use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureNoConverge {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root search did not converge within {0} iterations")]
    RootIterations(usize),

    #[error("eigenvalue {lambda:e} lies above the maximum of the spectral map on the bracket")]
    LambdaAboveMax { lambda: f64 },

    #[error(
        "eigensolver stalled at pair {index} after {iterations} iterations \
         (residual bound {residual:e})"
    )]
    EigenStalled {
        index: usize,
        iterations: usize,
        residual: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
