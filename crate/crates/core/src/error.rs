use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("unsupported field degree {0}")]
    UnsupportedDegree(usize),
    #[error("nothing found within bound: {0}")]
    NotFoundWithinBound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is singular")]
    Singular,
    #[error("integrality violated: {0}")]
    IntegralityViolated(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("coset table overflow at {0} cosets")]
    Overflow(usize),
    #[error("no invariant lattice below denominator bound {0}")]
    NoInvariantLattice(String),
    #[error("sign flip in odd dimension breaks the determinant")]
    OddDimensionSignFlip,
    #[error("bend matrix has reciprocal characteristic polynomial")]
    ReciprocalSpectrum,
    #[error("surface relator does not hold: {0}")]
    RelatorBroken(String),
    #[error("dimension 7 (G2 closure) is not supported")]
    G2Unsupported,
    #[error("closure certification inconclusive: {0}")]
    Inconclusive(String),
    #[error("closure classes {0} and {1} are incomparable")]
    IncomparableClasses(String, String),
    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),
    #[error("invalid residue {0} mod {1}")]
    InvalidResidue(u64, u64),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("no known seed: {0}")]
    NoKnownSeed(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
