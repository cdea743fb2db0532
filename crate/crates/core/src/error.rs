use thiserror::Error;

use crate::law::LawId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} has no closed-form density")]
    Unsupported(LawId),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("density returned non-finite value {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error:e})"
    )]
    Convergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("simulation error: {0}")]
    Simulation(String),
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}
