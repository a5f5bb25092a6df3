//! Fast direct solver for the preconditioned combined field integral equation
//! of 2D TE scattering by smooth closed perfectly conducting contours.
//!
//! The pipeline is:
//!
//! 1. [`geometry`]: parametric contour, arclength map and a mesh that is
//!    uniform in the curvilinear abscissa.
//! 2. [`bem`]: Galerkin assembly of the single layer, double layer,
//!    hypersingular and Gram matrices with piecewise-linear hat functions.
//! 3. [`system`]: the preconditioned matrix
//!    `C = (G/2 + D~) G^-1 (G/2 - D) + S~ G^-1 N` and its right-hand side.
//! 4. [`circulant`]: the same matrix for the circle of equal perimeter,
//!    which is circulant and handled through its FFT symbol.
//! 5. [`compression`]: randomized skeleton `C - C_c ≈ U Vᵀ`.
//! 6. [`solver`]: Woodbury inverse of `C_c + U Vᵀ` for many right-hand sides.
//!
//! [`physics`] supplies plane-wave excitations, the cylindrical-harmonic
//! reference solution, far fields and Fourier-ordered spectra.
//!
//! The low-level numerics ([`quadrature`], [`specfun`], [`geometry`],
//! [`circulant`]) are generic over [`Scalar`]; the dense linear algebra is
//! double precision and the aliases below fix the scalar type for it.

pub mod bem;
pub mod circulant;
pub mod compression;
pub mod dump;
pub mod error;
pub mod geometry;
pub mod physics;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod system;

pub use error::{Error, Result};

/// Real floating point type accepted by the generic numerical kernels.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + rustfft::FftNum
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[allow(non_camel_case_types)]
pub type c64 = num_complex::Complex<f64>;

pub type Contour = geometry::Contour<f64>;
pub type UniformMesh = geometry::UniformMesh<f64>;
pub type Wavenumber = specfun::ComplexWavenumber<f64>;
pub type Circulant = circulant::CirculantOperator<f64>;
pub type QuadRule = quadrature::Rule<f64>;

/// Free-space wave impedance in ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_412;
