//! Direct solver for `C_c + U Vᵀ` through the Woodbury identity
//!
//! `(C_c + U Vᵀ)⁻¹ = C_c⁻¹ - W (I + Vᵀ W)⁻¹ Vᵀ C_c⁻¹`, `W = C_c⁻¹ U`.
//!
//! Setup costs one batched circulant solve on `U` and an `r × r` LU; each
//! right-hand side then costs two FFTs and `O(N r)` work.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Mat, MatRef};

use std::time::Instant;

use crate::circulant::{CircleOperators, DEFAULT_SINGULAR_TOL};
use crate::compression::{skeletonize, CirculantDifference, SkeletonConfig, SkeletonFactorization};
use crate::system::{circulant_columns, PreconditionedSystem, SystemConfig};
use crate::{c64, Circulant, Contour, Error, Result, UniformMesh, Wavenumber};

/// Smallest accepted LU pivot of the core `I + Vᵀ W`, relative to the
/// larger of 1 and its largest pivot.
pub const CORE_PIVOT_TOL: f64 = 1e-14;
/// Core condition number above which a warning is logged.
pub const CORE_CONDITION_WARN: f64 = 1e8;

#[derive(Debug)]
pub struct DirectSolver {
    circulant: Circulant,
    w: Mat<c64>,
    v: Mat<c64>,
    u: Mat<c64>,
    core: Option<PartialPivLu<c64>>,
    core_condition: f64,
}

impl DirectSolver {
    pub fn factorize(circulant: Circulant, skeleton: &SkeletonFactorization) -> Result<Self> {
        let n = circulant.len();
        let r = skeleton.rank();
        if skeleton.u.nrows() != n || skeleton.v.nrows() != n || skeleton.v.ncols() != r {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: skeleton.u.nrows(),
            });
        }
        circulant.check_invertible(DEFAULT_SINGULAR_TOL)?;
        let w = circulant_columns(&circulant, skeleton.u.as_ref(), true)?;
        let (core, core_condition) = if r == 0 {
            (None, 1.0)
        } else {
            let mut k = skeleton.v.transpose() * &w;
            for i in 0..r {
                k[(i, i)] += c64::new(1.0, 0.0);
            }
            let s = k
                .singular_values()
                .map_err(|e| Error::Linalg(format!("SVD did not converge: {e:?}")))?;
            let cond = s[0] / s[r - 1];
            let lu = k.partial_piv_lu();
            let diag = lu.U().diagonal();
            let pivots: Vec<f64> = (0..r).map(|i| diag[i].norm()).collect();
            let big = pivots.iter().copied().fold(0.0, f64::max);
            let small = pivots.iter().copied().fold(f64::INFINITY, f64::min);
            let ratio = small / big.max(1.0);
            if !(ratio >= CORE_PIVOT_TOL) {
                return Err(Error::SingularCore { pivot_ratio: ratio });
            }
            if cond > CORE_CONDITION_WARN {
                log::warn!("Woodbury core is ill-conditioned: cond = {cond:.3e}");
            }
            (Some(lu), cond)
        };
        Ok(Self {
            circulant,
            w,
            v: skeleton.v.clone(),
            u: skeleton.u.clone(),
            core,
            core_condition,
        })
    }

    pub fn len(&self) -> usize {
        self.circulant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self) -> usize {
        self.w.ncols()
    }

    /// 2-norm condition number of `I + Vᵀ W`.
    pub fn core_condition(&self) -> f64 {
        self.core_condition
    }

    pub fn circulant(&self) -> &Circulant {
        &self.circulant
    }

    pub fn solve(&self, b: &[c64]) -> Result<Vec<c64>> {
        let n = self.len();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let x = self.solve_many(Mat::from_fn(n, 1, |i, _| b[i]).as_ref())?;
        Ok((0..n).map(|i| x[(i, 0)]).collect())
    }

    /// Solves for every column of `b`.
    pub fn solve_many(&self, b: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let n = self.len();
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.nrows(),
            });
        }
        let mut y = circulant_columns(&self.circulant, b, true)?;
        if let Some(core) = &self.core {
            let t = self.v.transpose() * &y;
            let s = core.solve(&t);
            y -= &self.w * &s;
        }
        Ok(y)
    }

    /// `(C_c + U Vᵀ) x`.
    pub fn apply_reconstructed(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let mut y = circulant_columns(&self.circulant, x, false)?;
        if self.rank() > 0 {
            y += &self.u * (self.v.transpose() * x);
        }
        Ok(y)
    }
}

/// Wall-clock seconds of each setup phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SetupTimings {
    pub assembly: f64,
    pub circulant: f64,
    pub compression: f64,
    pub factorization: f64,
}

/// The whole pipeline on one contour: system, circle extraction `C_c`,
/// skeleton of `C - C_c` and the Woodbury solver.
#[derive(Debug)]
pub struct FastDirectSolver {
    pub system: PreconditionedSystem,
    pub extraction: Circulant,
    pub skeleton: SkeletonFactorization,
    pub solver: DirectSolver,
    pub timings: SetupTimings,
}

impl FastDirectSolver {
    /// With `dense` set, `C` is formed once and the skeleton samples it
    /// directly; otherwise every sample goes through the operator factors.
    pub fn setup(
        contour: &Contour,
        mesh: &UniformMesh,
        k: f64,
        system: &SystemConfig,
        skeleton: &SkeletonConfig,
        dense: bool,
    ) -> Result<Self> {
        let mut timings = SetupTimings::default();
        let clock = Instant::now();
        let mut sys = PreconditionedSystem::assemble(contour, mesh, k, system)?;
        if dense {
            sys.form_dense()?;
        }
        timings.assembly = clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let radius = mesh.perimeter() / (2.0 * std::f64::consts::PI);
        let circle = CircleOperators::assemble(
            radius,
            mesh.len(),
            Wavenumber::real(k)?,
            sys.k_tilde,
            system.quadrature,
        )?;
        let extraction = circle.compose()?;
        timings.circulant = clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let diff = CirculantDifference {
            operator: &sys,
            circulant: &extraction,
        };
        let sk = skeletonize(&diff, skeleton)?;
        timings.compression = clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let solver = DirectSolver::factorize(extraction.clone(), &sk)?;
        timings.factorization = clock.elapsed().as_secs_f64();
        Ok(Self {
            system: sys,
            extraction,
            skeleton: sk,
            solver,
            timings,
        })
    }

    pub fn rank(&self) -> usize {
        self.skeleton.rank()
    }
}
