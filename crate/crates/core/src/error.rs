//! Workbench-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    // --- polynomial parsing ---
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("unknown token at position {pos}")]
    UnknownToken { pos: usize },

    // --- weight systems / classification ---
    #[error("polynomial is not quasi-homogeneous: the weight system is inconsistent")]
    NotQuasiHomogeneous,
    #[error("weight system is not unique (rank-deficient exponent matrix)")]
    NonUniqueWeights,
    #[error("weight {0} lies outside (0, 1/2]")]
    WeightOutOfRange(String),
    #[error("polynomial is not invertible: {0}")]
    NotInvertible(String),
    #[error("monomial structure matches no atomic type: {0}")]
    UnclassifiableAtom(String),
    #[error("Milnor number {0} is not a positive integer; weight system is degenerate")]
    NonIntegerMilnorNumber(String),

    // --- symmetry groups ---
    #[error("group does not preserve the polynomial (generator {0} moves a monomial)")]
    NotASymmetryGroup(String),
    #[error("group is not a subgroup of the maximal symmetry group")]
    NotASubgroup,

    // --- Jacobian rings ---
    #[error("non-isolated singularity: the standard-monomial set is infinite")]
    NonIsolatedSingularity,
    #[error("degenerate residue: the Hessian reduces to zero in the Jacobian ring")]
    DegenerateResidue,

    // --- state spaces ---
    #[error("pair is not admissible: the exponential grading element is missing from the group")]
    NotAdmissible,
    #[error("degenerate sector restriction on fixed locus {0:?}")]
    DegenerateRestriction(Vec<usize>),

    // --- operator algebra ---
    #[error("truncation {m} too small: need at least {need}")]
    TruncationTooSmall { m: i64, need: i64 },
    #[error("operator term exceeds the truncation window")]
    TruncationOverflow,
    #[error("operator is not infinitesimal symplectic")]
    NotSymplectic,
    #[error("half-integer z-power survived in an operator expected to be integral")]
    HalfPowerResidue,
    #[error("conjugation did not terminate: log T is not nilpotent in the window")]
    NonNilpotentWindow,

    // --- mirror map ---
    #[error("Krawitz map is not well defined on element {0}")]
    MapNotWellDefined(String),

    // --- Fermat Frobenius data ---
    #[error("product {0} * {1} is not determined by the covered relation list")]
    UncoveredPair(String, String),

    // --- CLI / config ---
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
