use thiserror::Error;

/// Errors raised by residue arithmetic, sequence evaluation and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("exponent {0} outside the supported range 1..=3")]
    ExponentOutOfRange(u32),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("{value} is not a {p}-adic integer (p divides the denominator)")]
    NotPAdic { value: String, p: u64 },
    #[error("binomial lower index {k} must be below p = {p}")]
    KTooLarge { k: u64, p: u64 },
    #[error("parameter {0} must be nonzero and coprime to p")]
    ZeroParameter(String),
    #[error("p = {p} is not congruent to {residue} mod {modulus}")]
    WrongResidueClass { p: u64, residue: u64, modulus: u64 },
    #[error("statement requires p >= {min}, got {p}")]
    PrimeTooSmall { p: u64, min: u64 },
    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unknown statement id `{0}`")]
    UnknownTheorem(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("malformed {what} literal `{text}`")]
    Parse { what: &'static str, text: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
