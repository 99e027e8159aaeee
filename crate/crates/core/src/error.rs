use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different coefficient algebras")]
    AlgebraMismatch,
    #[error("expression mixes coefficient algebras")]
    MixedAlgebras,
    #[error("algebra {0} carries no Hermitian structure")]
    NotHermitian(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("word length bound {bound} too small, need at least {needed}")]
    BoundTooSmall { bound: usize, needed: usize },
    #[error("adjoint requested for a morphism into the zero-length part")]
    ZeroArityTarget,
    #[error("unknown generator {0}")]
    DegreeUnknown(String),
    #[error("coefficient morphism is not well defined: {0}")]
    MorphismIllDefined(String),
    #[error("automorphism is not invertible: {0}")]
    NotInvertible(String),
    #[error("generator {0} has no action")]
    NoActions(String),
    #[error("invalid link grading: {0}")]
    InvalidLinkGrading(String),
    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),
    #[error("augmentation target does not match: {0}")]
    TargetMismatch(String),
    #[error("augmentation tuple has length {found}, expected {expected}")]
    TupleLengthMismatch { expected: usize, found: usize },
    #[error("coefficients are not finite-dimensional over a field: {0}")]
    InfiniteDimensionalCoefficients(String),
    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),
    #[error("augmentations must take values in a matrix algebra")]
    NotMatrixTarget,
    #[error("invalid differential: {0}")]
    InvalidDifferential(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    SyntaxError,
    UnknownGenerator,
    DegreeMismatch,
    ActionViolation,
    TargetMismatch,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::SyntaxError => "SyntaxError",
            ParseErrorKind::UnknownGenerator => "UnknownGenerator",
            ParseErrorKind::DegreeMismatch => "DegreeMismatch",
            ParseErrorKind::ActionViolation => "ActionViolation",
            ParseErrorKind::TargetMismatch => "TargetMismatch",
        };
        f.write_str(s)
    }
}

/// A description-language error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}
