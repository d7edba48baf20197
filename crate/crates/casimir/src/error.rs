use crate::lifshitz::PressureResult;

/// Errors produced by the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input was outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Lifshitz integrand denominator `1 - D exp(-r p)` came within
    /// 1e-15 of zero, which cannot happen for passive mirrors away from
    /// the zero-frequency limit.
    #[error("integrand denominator below 1e-15 at xi = {xi:e} rad/s, p = {p}")]
    NearPole { xi: f64, p: f64 },

    /// The evaluation budget ran out before the requested tolerance was
    /// met. Carries the best estimate obtained so far.
    #[error("pressure integral did not converge: best estimate {:e} Pa with error {:e} Pa after {} evaluations",
            best.total, best.error_estimate, best.evals)]
    NonConvergence { best: PressureResult },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
