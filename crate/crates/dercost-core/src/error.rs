use thiserror::Error;

/// Errors from input validation and cost computations.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum CoreError {
    /// An input field is outside its valid domain.
    #[error("invalid `{field}`: {reason}")]
    Invalid {
        /// Name of the offending field or parameter.
        field: &'static str,
        /// What about it is wrong.
        reason: String,
    },

    /// The equipment life is not a whole number of years and fractional
    /// horizons were not enabled.
    #[error(
        "equipment life of {horizon} years is not a whole number of years; \
         allow fractional horizons to accept it"
    )]
    NonIntegerHorizon {
        /// Equipment life in years at the planned duty cycle.
        horizon: f64,
    },

    /// An escalation year index lies outside the project.
    #[error("year index {year} is outside the {project_years}-year project")]
    YearOutOfRange {
        /// Offending zero-based year index.
        year: u32,
        /// Project length in years.
        project_years: u32,
    },

    /// Two containers that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl CoreError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        CoreError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}
