use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coherent amplitude is not finite: {0}")]
    NonFiniteLabel(String),
    #[error("superposition needs at least one mode")]
    NoModes,
    #[error("term has {found} labels, expected {expected}")]
    LabelCount { expected: usize, found: usize },
    #[error("mode count mismatch: {0} vs {1}")]
    ModeMismatch(usize, usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("basis must hold 1..=8 labels, got {0}")]
    BasisSize(usize),
    #[error("basis labels are not pairwise distinct")]
    DuplicateLabel,
    #[error("Gram matrix ill-conditioned (det = {0:e})")]
    GramIllConditioned(f64),
    #[error("label {0} not found in basis")]
    LabelNotInBasis(String),
    #[error("bad mode index {0}")]
    BadMode(usize),
    #[error("noise parameter must lie in [0, 1], got {0}")]
    BadNoise(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("coefficient matrix not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("expected two-qubit dimensions, got {0:?}")]
    BadDims(Vec<usize>),
    #[error("invalid bipartition: {0}")]
    BadSplit(String),
    #[error("negative radicand {0:e}")]
    NegativeRadicand(f64),
    #[error("parameter outside its domain: {0}")]
    DomainError(String),
    #[error("atom is never found in the ground state")]
    NeverGround,
    #[error("malformed recipe: {0}")]
    BadRecipe(String),
    #[error("wrong number of weights for {kind}: expected {expected}, got {found}")]
    WeightCount {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("Fock cutoff {given} below required {required}")]
    CutoffTooSmall { given: usize, required: usize },
    #[error("negativity cross-check failed: {0:e} vs {1:e}")]
    NegativityMismatch(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;
