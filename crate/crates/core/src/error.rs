use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("operation requires the ring of integers")]
    ExpectedIntegers,
    #[error("operation requires a residue ring modulo a power of two")]
    ExpectedTwoPowerResidue,
    #[error("residue modulus must be at least 2")]
    InvalidModulus,
    #[error("determinant is not 1 in the residue ring")]
    DetNotOne,
    #[error("matrix is not idempotent modulo 2")]
    NotIdempotentMod2,
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("expected a rank-1 idempotent strictly between 0 and the identity")]
    NotRankOneIdempotent,
    #[error("homological dimension {0} is out of range 0..={1}")]
    DimensionOutOfRange(u32, u32),
    #[error("cycle is not homogeneous of the expected dimension")]
    NotHomogeneous,
    #[error("total degree of the factors does not match the source dimension")]
    DegreeMismatch,
    #[error("source/target quadrics do not match")]
    QuadricMismatch,
    #[error("correspondence is not idempotent")]
    NotIdempotent,
    #[error("correspondence is not Galois-invariant")]
    NotGalInvariant,
    #[error("cannot reduce coefficients from {0} to {1}")]
    InvalidReduction(String, String),
    #[error("query modulus exceeds the context modulus")]
    ModulusTooLarge,
    #[error("correspondence is not rational in the context")]
    NotRational,
    #[error("correspondence is not invertible on the image summands")]
    NotInvertibleOnSummands,
    #[error("invariant idempotent with middle rank 1 next to a nontrivial discriminant")]
    MiddleRankContradiction,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
