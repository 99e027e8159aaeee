//! Semifree noncommutative DGAs, their augmentations, and the A∞
//! operations on linearized complexes.

pub mod ainfinity;
pub mod algebra;
pub mod augmentation;
pub mod bimodule;
pub mod corpus;
pub mod dga;
pub mod dsl;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod report;
pub mod scalar;

pub use ainfinity::{Case, SignConvention, VerifyOptions};
pub use algebra::{Algebra, AlgebraElement, AlgebraKind, AlgebraMorphism, Word};
pub use augmentation::Augmentation;
pub use bimodule::{DualElement, Generator, GeneratorBasis, TensorElement, TensorWord};
pub use dga::{Automorphism, LinkGrading, SemifreeDga};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use report::{Report, Violation};
pub use scalar::{Ring, Scalar};
