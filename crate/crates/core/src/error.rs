use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector does not lie in the given space")]
    NotInSpace,
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("no solution: v ∧ ℓ ≠ 0")]
    NoSolution,
    #[error("prime factor {0} does not fit in a machine word")]
    PrimeTooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("vector {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("monoid is not sharp: the generated cone contains a line")]
    NotSharp,
    #[error("generators do not generate every lattice point of their cone; {witness:?} is missing")]
    NotSaturatedMonoid { witness: Vec<String> },
    #[error("{0:?} is not an element of the monoid")]
    NotAnElement(Vec<String>),
    #[error("face does not belong to this monoid")]
    NotAFace,
    #[error("grading is not strictly positive on generator {0}")]
    BadGrading(usize),
    #[error("{0} facets exceed the supported maximum of 63")]
    TooManyFacets(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtdError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("q generator {0} is not an element of P")]
    QNotInP(usize),
    #[error("q generator {0} maps to zero, so Q → P is not injective")]
    NotInjective(usize),
    #[error("P is not a free Q-set: {reason} (witness {witness:?})")]
    NotFreeBasis { witness: Vec<String>, reason: String },
    #[error("the free basis E is not a union of faces (witness {witness:?})")]
    BasisNotFaceUnion { witness: Vec<String> },
    #[error("facet set misses vertical facets {missing:?}")]
    FacetSetTooSmall { missing: Vec<usize> },
    #[error("facet descriptor {0} does not span a facet of P")]
    InvalidFacet(usize),
    #[error("{0:?} is not an element of P")]
    NotAnElement(Vec<String>),
    #[error("{0:?} is not in E_K")]
    NotInEk(Vec<String>),
    #[error("operation requires Q ≅ ℕ, but Q has rank {0}")]
    BaseNotRankOne(usize),
    #[error("ideal generator {0} is not an element of Q")]
    IdealNotInQ(usize),
    #[error("{0} chart faces; subsets are enumerated only up to 16")]
    TooManyCharts(usize),
    #[error("Q \\ K must be finite")]
    IdealNotCofinite,
}

pub(crate) fn show(v: &[num_bigint::BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
