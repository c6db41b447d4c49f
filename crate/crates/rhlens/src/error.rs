use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the operation (on a branch cut, outside
    /// the lens, too close to the interval, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Declared exponents or weight parameters are invalid or inadmissible
    /// for the requested operation.
    #[error("invalid weight parameters: {0}")]
    Weight(String),

    /// The stability check of the recurrence construction failed before the
    /// requested degree; coefficients are trusted only up to `trusted`.
    #[error("recurrence unstable past degree {trusted} (requested {requested})")]
    Precision { trusted: usize, requested: usize },

    /// A point could not be classified against a contour within tolerance.
    #[error("point within {tol:e} of the contour; region is ambiguous")]
    RegionTieBreak { tol: f64 },

    /// The discretized singular-integral operator is singular or too
    /// ill-conditioned to trust at this resolution.
    #[error("singular integral operator not invertible at this resolution (cond ~ {cond:.3e})")]
    SingularOperator { cond: f64 },

    /// A quadrature or series evaluation failed to reach its target.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Malformed plain-text record or configuration value.
    #[error("config error: {0}")]
    Config(String),

    /// Regression fit does not have enough usable points.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
