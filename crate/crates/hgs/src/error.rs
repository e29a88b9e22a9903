use thiserror::Error;

/// Errors raised by ring construction, hypergraph validation and state operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid ring parameters: {0}")]
    BadParameter(String),
    #[error("modulus is not monic of degree {0}")]
    NonMonic(usize),
    #[error("modulus reduces to a reducible polynomial over F_{0}")]
    ReducibleModulus(u32),
    #[error("coefficient {value} out of range [0, {bound})")]
    BadCoefficient { value: u64, bound: u32 },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("no element of maximal multiplicative order found")]
    NoPrimitiveElement,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("exponent function not defined on the given hyperedge")]
    DomainMismatch,
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("grade mismatch: expected {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },
    #[error("operation requires the {0} basis")]
    WrongBasis(&'static str),
    #[error("states are tagged with different bases")]
    BasisMismatch,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("hypergraph is not effective")]
    NotEffective,
    #[error("operation requires the binary field F_2")]
    NotBinaryField,
    #[error("exponent {exp} exceeds delta = {delta}")]
    ExponentOutOfRange { exp: u32, delta: u32 },
    #[error("operation requires a Galois field (r = 1)")]
    NotField,
    #[error("operation requires a prime field (r = d = 1)")]
    NotPrimeField,
    #[error("polynomial degree {degree} exceeds {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid marking: {0}")]
    BadMark(String),
    #[error("invalid hyperedge: {0}")]
    BadEdge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::BadParameter(_) => "BadParameter",
            Error::NonMonic(_) => "NonMonic",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::BadCoefficient { .. } => "BadCoefficient",
            Error::RingMismatch => "RingMismatch",
            Error::NoPrimitiveElement => "NoPrimitiveElement",
            Error::OutOfRange(_) => "OutOfRange",
            Error::DomainMismatch => "DomainMismatch",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::GradeMismatch { .. } => "GradeMismatch",
            Error::WrongBasis(_) => "WrongBasis",
            Error::BasisMismatch => "BasisMismatch",
            Error::TooLarge(_) => "TooLarge",
            Error::NotEffective => "NotEffective",
            Error::NotBinaryField => "NotBinaryField",
            Error::ExponentOutOfRange { .. } => "ExponentOutOfRange",
            Error::NotField => "NotField",
            Error::NotPrimeField => "NotPrimeField",
            Error::DegreeTooHigh { .. } => "DegreeTooHigh",
            Error::Singular => "Singular",
            Error::BadMark(_) => "BadMark",
            Error::BadEdge(_) => "BadEdge",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
