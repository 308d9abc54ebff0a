use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented domain.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// A point lies outside the region where the operation is defined.
    #[error("point {value} outside the allowed region ({region})")]
    OutOfDomain { value: String, region: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The stored moments cannot push the series tail below the required bound.
    #[error(
        "moment sequence of length {length} too short: tail bound {bound:.3e} at |w| = {radius} exceeds {limit:.1e}"
    )]
    TailBound {
        length: usize,
        radius: f64,
        bound: f64,
        limit: f64,
    },

    #[error("power iteration did not converge after {iterations} iterations (last relative change {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
