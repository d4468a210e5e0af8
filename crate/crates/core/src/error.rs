use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is outside the supported range {1}..={2}")]
    DimensionOutOfRange(usize, usize, usize),

    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),

    #[error("desk-scale exceeded: {0}")]
    ScaleGuard(String),

    #[error("closure exceeded the budget of {0} elements")]
    BudgetExceeded(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("vectors do not form a basis of the ambient space")]
    NotABasis,

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group has not been enumerated")]
    NotEnumerated,

    #[error("not an elementary abelian regular group: {0}")]
    NotRegular(String),

    #[error("label map does not induce an isomorphism")]
    NotAnIsomorphism,

    #[error("invalid parameter b: {0}")]
    InvalidB(String),

    #[error("invalid split dimension {d} for n = {n}")]
    InvalidSplit { n: usize, d: usize },

    /// d = n - 1 only yields T: no regular subgroup meets T in a hyperplane.
    #[error("depth d = n - 1 = {0} is excluded: a weak-key space of dimension n - 1 forces the group to be T")]
    MaximalIntersection(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
