use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty coefficient vector")]
    EmptyVector,
    #[error("value is not rational")]
    NotRational,
    #[error("value is not invertible")]
    NotInvertible,
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("group closure exceeds order cap {0}")]
    OrderCapExceeded(usize),
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("cocycle condition violated at (g,h,k) = ({0},{1},{2})")]
    CocycleViolated(usize, usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characters belong to different groups")]
    GroupMismatch,
    #[error("character has no pure weight")]
    NoPureWeight,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("representation relation fails at (g,h) = ({0},{1})")]
    RepresentationRelation(usize, usize),
    #[error("matrix is not a projector onto an invariant subspace")]
    NotInvariantProjector,
    #[error("non-integral Euler pairing {0}")]
    NonIntegralEuler(String),
    #[error("object {0} has no K-class")]
    MissingKClass(usize),
    #[error("mutation position {position} out of range for {len} objects")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("mutation broke numerical exceptionality")]
    MutationBrokeExceptionality,
    #[error("inconsistent weights: {0}")]
    InconsistentWeights(String),
    #[error("object {0} has no weight tag but its block carries a nontrivial cocycle")]
    WeightTagMissing(usize),
    #[error("action inconsistent with collection: {0}")]
    ActionInconsistent(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
