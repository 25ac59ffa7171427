use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure mode of the checks in this crate.
///
/// Variants mirror the kind of contract that was violated so callers (the CLI
/// in particular) can map them onto report statuses without string matching.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("cover violation: {0}")]
    Cover(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("capability error: {0}")]
    Capability(String),
}
