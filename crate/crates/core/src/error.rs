use thiserror::Error;

/// Errors raised by the engine's constructors and operations.
///
/// Verification failures are not errors: they are reported as failing
/// checks inside a [`crate::report::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient parameter lists differ: {left:?} vs {right:?}")]
    ParamMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown formal parameter `{0}`")]
    UnknownParam(String),

    #[error("`{0}` is not a unit")]
    NotAUnit(String),

    #[error("degree has {found} slots, the grading group needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid commutation factor: {0}")]
    InvalidFactor(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("elements belong to different presentations (`{0}` vs `{1}`)")]
    PresentationMismatch(String, String),

    #[error("negative power of non-invertible generator `{0}`")]
    NegativePower(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("derivation table has {found} images, presentation has {expected} generators")]
    DerivationShape { expected: usize, found: usize },

    #[error("unknown basis section `{0}`")]
    UnknownBasisSection(String),

    #[error("pair mismatch: {0}")]
    PairMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("metric is degenerate: kernel is non-trivial")]
    KernelNonTrivial,

    #[error("metric entries are not field scalars and no inverse was supplied")]
    InverseUnavailable,

    #[error("supplied metric inverse is invalid: {0}")]
    InverseInvalid(String),

    #[error("Koszul construction failed its own checks: {0}")]
    KoszulCheckFailed(String),

    #[error("sigma cannot be completed to a basis: {0}")]
    SigmaNotBasisExtendable(String),

    #[error("flow needs a derivation of degree zero, got {0}")]
    NonzeroDegreeFlow(String),

    #[error("factor compatibility: {0}")]
    FactorCompatibility(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("catalog entry `{key}` fails its own check `{check}`")]
    CatalogInvariant { key: String, check: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
