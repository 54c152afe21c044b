use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeterMatrix(String),
    #[error("invalid diagram map: {0}")]
    InvalidDiagramMap(String),
    #[error("component {0} is not of finite type")]
    NotFiniteType(String),
    #[error("component {0} is not an irreducible affine diagram")]
    NotAffine(String),
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("vector is not in the cocharacter lattice: {0:?}")]
    NotInLattice(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("elements belong to different group contexts")]
    MixedContexts,
    #[error("{0} is not dominant")]
    NotDominant(String),
    #[error("no length-zero element in the required Kottwitz class")]
    NoOmegaElement,
    #[error("invalid parahoric level: {0}")]
    InvalidLevel(String),
    #[error("basic class is not unique: {0} minimal classes")]
    NonUniqueBasic(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("invalid genus {0}: must be at least 1")]
    InvalidGenus(usize),
}

pub type Result<T, E = AtlasError> = std::result::Result<T, E>;
