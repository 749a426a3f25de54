use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{0} diverges at t = 1")]
    Divergence(&'static str),

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("invalid cube function: {0}")]
    InvalidFunction(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("mask file line {line}: {message}")]
    MaskFormat { line: usize, message: String },
}

/// Values this far outside a closed domain are treated as rounding noise and clamped.
pub(crate) const DOMAIN_SLACK: f64 = 1e-12;

/// Validates `value` against `[lo, hi]`, clamping rounding noise of size
/// [`DOMAIN_SLACK`] back onto the interval.
pub(crate) fn clamp_domain(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    domain: &'static str,
) -> Result<f64> {
    if value.is_nan() || value < lo - DOMAIN_SLACK || value > hi + DOMAIN_SLACK {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    } else {
        Ok(value.clamp(lo, hi))
    }
}
