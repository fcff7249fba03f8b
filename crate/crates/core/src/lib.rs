//! Exact computation in multiparametric quantum matrix algebras.
//!
//! The crate implements the algebras `M(P,Q)` and `M_q` through PBW normal
//! forms, quantum minors in both settings, the embedding
//! `T^i_j -> l^j (x) t^i_j (x) r_i` into `S_l (x) M_q (x) S_r`, and the
//! rescaling procedure that turns homogeneous one-parameter minor identities
//! into multiparametric ones. Every translated identity can be checked
//! independently by expanding it and reducing to normal form.

pub mod identity;
pub mod labels;
pub mod minors;
pub mod ncalg;
pub mod params;
pub mod tensor;
pub mod translate;

pub use identity::{MinorIdentity, MinorTerm, ParseError};
pub use labels::{Multilabel, Permutation};
pub use minors::MinorSymbol;
pub use ncalg::{Generator, NCPoly, Preset, RelationSystem, Tag, Word};
pub use params::{Label, Mode, Monomial, ParamSpec, Scalar, Var};
pub use tensor::{Bidegree, TensorAlgebra, TensorPoly};
pub use translate::VerificationReport;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("cannot invert non-monomial scalar `{0}`")]
    NonInvertible(String),
    #[error("multilabel {0} has repeated labels")]
    RepeatedLabel(String),
    #[error("invalid minor: {0}")]
    InvalidMinor(String),
    #[error("algebra mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },
    #[error("unknown algebra preset `{0}`")]
    UnknownPreset(String),
    #[error("identity is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("wrong mode: expected {expected}, found {found}")]
    WrongMode { expected: Mode, found: Mode },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Validation(String),
}

impl Error {
    /// Whether the error stems from malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
