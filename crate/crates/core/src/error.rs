use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("unsupported query: {0}")]
    UnsupportedQuery(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("ambiguous resonance: {0}")]
    AmbiguousResonance(String),

    #[error("stationary population undefined: total rate is zero")]
    UndefinedStationary,

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Config(#[from] crate::io::config::ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error comes from bad input rather than a numeric failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::UnsupportedRange(_)
                | Error::UnsupportedQuery(_)
                | Error::UnknownScenario(_)
                | Error::Config(_)
        )
    }
}
