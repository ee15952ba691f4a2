//! Crate-wide error type.

use thiserror::Error;

use crate::capset::CapsetError;
use crate::iet::IetError;
use crate::monoid::MonoidError;
use crate::morphism::MorphismError;
use crate::parse::ParseError;
use crate::preserve::PreserveError;
use crate::qfield::QfieldError;
use crate::words::WordError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Qfield(#[from] QfieldError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Iet(#[from] IetError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Capset(#[from] CapsetError),
    #[error(transparent)]
    Preserve(#[from] PreserveError),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Qfield(_) => "qfield",
            Error::Word(_) => "words",
            Error::Iet(_) => "iet",
            Error::Morphism(_) => "morphism",
            Error::Monoid(_) => "monoid",
            Error::Parse(_) => "parse",
            Error::Capset(_) => "capset",
            Error::Preserve(_) => "preserve",
        }
    }
}
