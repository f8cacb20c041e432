use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("zero bracket [{lower}, {upper}] does not straddle a sign change")]
    BracketFailure { lower: f64, upper: f64 },

    #[error("invalid mode k = {0}: only degrees k >= 2 carry a deficit ratio")]
    InvalidMode(u32),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("unsupported dimension N = {0}")]
    UnsupportedDimension(u32),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("discrete operator is not positive definite: {0}")]
    Indefinite(String),

    #[error("ill-conditioned extrapolation: {0}")]
    IllConditionedFit(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
