use thiserror::Error;

/// Errors raised by library operations.
///
/// Variants are named after the failure they report; the payload carries
/// whatever context is cheap to attach.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate factor: {0}")]
    DegenerateFactor(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("need at least {needed} extrapolation samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid highest weight m = {0}")]
    InvalidWeight(i64),
    #[error("spectral parameter is zero")]
    ZeroSpectralParameter,
    #[error("spectral parameter u = {0} sits on a pole")]
    SpectralParameterAtPole(String),
    #[error("root at pole: {0}")]
    RootAtPole(String),
    #[error("coincident roots: {0}")]
    CoincidentRoots(String),
    #[error("evaluation point coincides with a root: {0}")]
    EvaluationAtRoot(String),
    #[error("resonant ratio {0}")]
    ResonantRatio(String),
    #[error("singular denominator: {0}")]
    SingularDenominator(String),
    #[error("pole collision: {0}")]
    PoleCollision(String),
    #[error("path diverged at t = {t}: {reason}")]
    PathDivergence { t: f64, reason: String },
    #[error("path collision at t = {t}: relative gap {gap:e}")]
    PathCollision { t: f64, gap: f64 },
    #[error("singular jacobian (condition {0:e})")]
    SingularJacobian(f64),
    #[error("extrapolation diverged: spread {spread:e} at coefficient {index}")]
    ExtrapolationDiverged { index: usize, spread: f64 },
    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),
    #[error("zero twist parameter at node {0}")]
    ZeroTwist(usize),
    #[error("no polynomial solution: {0}")]
    NoPolynomialSolution(String),
    #[error("ill-conditioned linear system (condition {0:e})")]
    IllConditioned(f64),
    #[error("pole at evaluation point: {0}")]
    PoleAtEvaluation(String),
    #[error("singular gauge matrix at u = {0}")]
    SingularGauge(String),
    #[error("inexact polynomial division (relative remainder {0:e})")]
    InexactDivision(f64),
    #[error("newton diverged after {0} restarts")]
    NewtonDiverged(usize),
    #[error("coincident coordinates: {0}")]
    CoincidentCoordinates(String),
    #[error("invalid chain parameters: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
