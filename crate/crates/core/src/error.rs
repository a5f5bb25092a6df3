use thiserror::Error;

/// Errors raised by geometry, quadrature, assembly and the solver stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate curve: parametric speed vanishes near t = {t}")]
    DegenerateCurve { t: f64 },

    #[error("mesh needs at least {min} nodes, got {n}")]
    MeshTooSmall { n: usize, min: usize },

    #[error("Hankel function evaluated at the singular argument z = 0")]
    SingularArgument,

    #[error("argument outside the upper half-plane (Im z = {im})")]
    DomainError { im: f64 },

    #[error("Bessel Y_{order}({x}) overflows")]
    OutOfRange { order: usize, x: f64 },

    #[error("cylindrical-harmonic series not converged at order {order}; increase the truncation order")]
    SeriesNotConverged { order: usize },

    #[error("element pair ({test}, {trial}) has coincident points; the mesh self-intersects")]
    SelfIntersection { test: usize, trial: usize },

    #[error("quadrature failed on element pair ({test}, {trial})")]
    Quadrature { test: usize, trial: usize },

    #[error("near-singular circulant symbol at mode {mode} (|lambda_m| / max |lambda| = {ratio:e})")]
    NearSingularSymbol { mode: usize, ratio: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("insufficient singular value decay: rank {rank} exceeds the cap {cap} before reaching the tolerance")]
    InsufficientDecay { rank: usize, cap: usize },

    #[error("Woodbury core singular (pivot ratio {pivot_ratio:e})")]
    SingularCore { pivot_ratio: f64 },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
