use alloc::string::String;

use crate::parse::ParseDiagnostic;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero has no prime factorization")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} exceeds the factorization limit of 2^63-1")]
    TooLargeToFactor(u64),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("integer overflow while expanding a factored value")]
    ValueOverflow,
    #[error("group too large: enumeration exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("generator of degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("images do not form a permutation of 0..{degree}")]
    NotAPermutation { degree: usize },
    #[error("permutation is not an element of the group")]
    NotMember,
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("{0} is not squarefree; use the curated catalog for this order")]
    NotSquarefree(u64),
    #[error("order {0} exceeds the squarefree enumeration limit")]
    OrderTooLarge(u64),
    #[error("order {0} is not in the curated catalog")]
    NotInCatalog(u64),
    #[error("catalog for order {order} has no entry {index}")]
    NoSuchCatalogEntry { order: u64, index: usize },
    #[error("orders {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("exponent set must be nonempty")]
    EmptyExpSet,
    #[error("exponent set values must be at least 1")]
    ZeroExponent,
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(ParseDiagnostic),
}

impl From<ParseDiagnostic> for Error {
    fn from(d: ParseDiagnostic) -> Self {
        Error::Parse(d)
    }
}
