use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;

/// Every failure the library can report. Each variant carries a stable
/// machine-readable code, see [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands live over different coefficient fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("leading coefficient {coeff} is not a unit of the integers")]
    NonunitLeadingCoeff { coeff: String },
    #[error("denominator divisible by {p} at {location}")]
    DenominatorDivisibleByP { p: u64, location: String },
    #[error("rescaling factor must be positive, got {factor}")]
    NonpositiveFactor { factor: BigRational },
    #[error("{value} is not a prime")]
    NotPrime { value: u64 },
    #[error("gcd of two zero polynomials")]
    ZeroInputs,
    #[error("reduction mod {p} failed: {reason}")]
    ReductionFailure { p: u64, reason: String },
    #[error("modulus is not certified irreducible")]
    UnverifiedModulus,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("residue factorization unavailable: {reason}")]
    ResidueFactorizationUnavailable { reason: String },
    #[error("insufficient precision: {reason}")]
    InsufficientPrecision { reason: String },
    #[error("truncation too coarse: {reason}")]
    TruncationTooCoarse { reason: String },
    #[error("class is a boundary (zero in homology)")]
    NullClass,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("rank {rank} exceeds the cap {cap}")]
    RankOverflow { rank: u128, cap: usize },
    #[error("coefficient characteristic {found} does not match the action order {expected}")]
    CharMismatch { expected: u64, found: u64 },
    #[error("generator does not generate the algebra (minimal polynomial degree {degree} < rank {rank})")]
    NotPrimitive { degree: usize, rank: usize },
    #[error("idempotent set carries no factorization certificate")]
    MissingCertificate,
    #[error("class {name} has no label")]
    UnlabeledClass { name: String },
    #[error("shape mismatch: {reason}")]
    ShapeMismatch { reason: String },
    #[error("invalid complex: {}", .0.join("; "))]
    InvalidComplex(Vec<String>),
    #[error("invalid algebra: {reason}")]
    InvalidAlgebra { reason: String },
    #[error("invalid action: {reason}")]
    InvalidAction { reason: String },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "FIELD_MISMATCH",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::NonunitLeadingCoeff { .. } => "NONUNIT_LEADING_COEFF",
            Error::DenominatorDivisibleByP { .. } => "DENOMINATOR_DIVISIBLE_BY_P",
            Error::NonpositiveFactor { .. } => "NONPOSITIVE_FACTOR",
            Error::NotPrime { .. } => "NOT_PRIME",
            Error::ZeroInputs => "ZERO_INPUTS",
            Error::ReductionFailure { .. } => "REDUCTION_FAILURE",
            Error::UnverifiedModulus => "UNVERIFIED_MODULUS",
            Error::NotSquarefree => "NOT_SQUAREFREE",
            Error::ResidueFactorizationUnavailable { .. } => "RESIDUE_FACTORIZATION_UNAVAILABLE",
            Error::InsufficientPrecision { .. } => "INSUFFICIENT_PRECISION",
            Error::TruncationTooCoarse { .. } => "TRUNCATION_TOO_COARSE",
            Error::NullClass => "NULL_CLASS",
            Error::NotACycle => "NOT_A_CYCLE",
            Error::RankOverflow { .. } => "RANK_OVERFLOW",
            Error::CharMismatch { .. } => "CHAR_MISMATCH",
            Error::NotPrimitive { .. } => "NOT_PRIMITIVE",
            Error::MissingCertificate => "MISSING_CERTIFICATE",
            Error::UnlabeledClass { .. } => "UNLABELED_CLASS",
            Error::ShapeMismatch { .. } => "SHAPE_MISMATCH",
            Error::InvalidComplex(_) => "INVALID_COMPLEX",
            Error::InvalidAlgebra { .. } => "INVALID_ALGEBRA",
            Error::InvalidAction { .. } => "INVALID_ACTION",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
