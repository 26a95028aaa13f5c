use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("cannot compose: {0}")]
    Composition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("not a category: {0}")]
    NotACategory(String),
    /// Truncation and connectivity are only defined here for strict-Segal
    /// inputs; anything weaker would need the categorical completion.
    #[error("requires Cat: {0}")]
    RequiresCat(String),
    #[error("outside window: {0}")]
    OutsideWindow(String),
    #[error("dump format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
