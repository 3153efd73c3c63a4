use thiserror::Error;

/// Every failure the engine can report.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// that the command-line front end surfaces verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bound exceeded: {what} needs {needed}, cap is {cap}")]
    BoundExceeded { what: String, needed: String, cap: usize },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("not a cocone: {0}")]
    NotACocone(String),

    #[error("no mediating morphism: {0}")]
    NoMediator(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("homomorphism violation: {0}")]
    HomomorphismViolation(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("map is not surjective: {0}")]
    NotSurjective(String),

    #[error("solver failed: {0}")]
    SolverFailed(String),

    #[error("recoloring is ill-defined: {0}")]
    ChiPrimeIllDefined(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::NotACocone(_) => "NotACocone",
            Error::NoMediator(_) => "NoMediator",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::HomomorphismViolation(_) => "HomomorphismViolation",
            Error::SearchExhausted(_) => "SearchExhausted",
            Error::NotSurjective(_) => "NotSurjective",
            Error::SolverFailed(_) => "SolverFailed",
            Error::ChiPrimeIllDefined(_) => "ChiPrimeIllDefined",
            Error::Unsupported(_) => "Unsupported",
            Error::Invalid(_) => "Invalid",
        }
    }

    pub(crate) fn bound(what: impl Into<String>, needed: impl ToString, cap: usize) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            needed: needed.to_string(),
            cap,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
