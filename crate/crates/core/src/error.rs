use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("composite modulus unsupported: {0}")]
    CompositeModulus(u64),
    #[error("modulus {0} is outside the supported range 2..=65521")]
    ModulusOutOfRange(u64),
    #[error("moduli differ: {0} and {1}")]
    ModulusMismatch(u16, u16),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("degree {0} is too large for an exhaustive scan of the symmetric group")]
    DegreeTooLarge(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("scale cap exceeded: about {estimate} candidates, cap {cap}")]
    ScaleCap { estimate: u128, cap: u128 },
    #[error("subgroup is not admissible: {0}")]
    NotAdmissible(String),
    #[error("the group action leaves the key set: {0}")]
    ActionLeavesSet(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("genus is not an integer for k={k}, n={n}, m={m}")]
    NonIntegralGenus { k: u64, n: u64, m: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
