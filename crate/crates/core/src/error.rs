use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical core. Values are carried as `f64`
/// regardless of the scalar type the failing routine was instantiated with.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function} overflows at {at}")]
    Overflow { function: &'static str, at: String },

    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("precondition violated in {function}: {detail}")]
    Precondition { function: &'static str, detail: String },

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("decay hint violated at x = {x}: |f| = {observed:e} exceeds 10x envelope {envelope:e}")]
    DecayHintViolated { x: f64, observed: f64, envelope: f64 },

    #[error("{what} did not converge ({detail})")]
    NonConvergence { what: &'static str, detail: String },

    #[error("singularity of {function} at the identity")]
    Singularity { function: &'static str },

    #[error("{0}")]
    UnsupportedRepresentation(String),

    #[error("resolution budget exceeded: |tau|/decay = {ratio:e} > {limit:e}")]
    ResolutionBudget { ratio: f64, limit: f64 },

    #[error("Psi evaluation mode {mode} not usable here: {detail}")]
    ModeMismatch { mode: &'static str, detail: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping any `Context` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
