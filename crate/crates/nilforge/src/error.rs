//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("annihilator has dimension {0}, expected 1")]
    AnnihilatorNotOneDim(usize),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("not a complement of the annihilator: {0}")]
    BadComplement(String),
    #[error("signature is undefined over the Gaussian rationals")]
    ComplexFieldUnsupported,
    #[error("map is not an algebra isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("basis vector {0} does not lie in the kernel of the pointing")]
    BasisNotInKernel(usize),
    #[error("quadratic part is degenerate")]
    DegenerateQuadraticPart,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("g3 vanishes, the invariant is undefined")]
    ZeroG3,
    #[error("parameter out of range: {0}")]
    RangeError(String),
    #[error("D-invariant does not have q = 2")]
    NotQ2,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("not graded: {0}")]
    NotGraded(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("point is not on the variety")]
    PointNotOnVariety,
    #[error("nil-index {0} exceeds 4")]
    NuTooLarge(usize),
    #[error("matrices do not generate a commutative nilpotent algebra: {0}")]
    NotNilpotentAlgebra(String),
}

impl Error {
    /// Stable variant name, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::Singular => "Singular",
            Error::Parse(_) => "ParseError",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::NotNilpotent => "NotNilpotent",
            Error::AnnihilatorNotOneDim(_) => "AnnihilatorNotOneDim",
            Error::NotAnIdeal => "NotAnIdeal",
            Error::BadComplement(_) => "BadComplement",
            Error::ComplexFieldUnsupported => "ComplexFieldUnsupported",
            Error::NotAnIsomorphism(_) => "NotAnIsomorphism",
            Error::BasisNotInKernel(_) => "BasisNotInKernel",
            Error::DegenerateQuadraticPart => "DegenerateQuadraticPart",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::ZeroG3 => "ZeroG3",
            Error::RangeError(_) => "RangeError",
            Error::NotQ2 => "NotQ2",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::BlockMismatch(_) => "BlockMismatch",
            Error::UnknownFormat(_) => "UnknownFormat",
            Error::NotGraded(_) => "NotGraded",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::PointNotOnVariety => "PointNotOnVariety",
            Error::NuTooLarge(_) => "NuTooLarge",
            Error::NotNilpotentAlgebra(_) => "NotNilpotentAlgebra",
        }
    }
}
