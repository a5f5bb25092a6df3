//! Randomized low-rank compression `A ≈ U Vᵀ`.
//!
//! Adaptive blocked range finder with Gaussian sketches, one round of power
//! iteration and re-orthogonalization, followed by a truncated SVD of the
//! projected matrix `B = Qᴴ A`. Truncation is relative: singular values
//! below `eps · σ_max` are dropped.

use faer::{Mat, MatRef};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::system::{circulant_columns, PreconditionedSystem};
use crate::{c64, Circulant, Error, Result};

/// Matrix-free operator that can be applied with its adjoint.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>>;
    /// `Aᴴ x`.
    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>>;
}

impl LinearOperator for Mat<c64> {
    fn nrows(&self) -> usize {
        Mat::nrows(self)
    }

    fn ncols(&self) -> usize {
        Mat::ncols(self)
    }

    fn apply(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        check_rows(Mat::ncols(self), x)?;
        Ok(self * x)
    }

    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        check_rows(Mat::nrows(self), x)?;
        Ok(self.adjoint() * x)
    }
}

impl LinearOperator for PreconditionedSystem {
    fn nrows(&self) -> usize {
        self.len()
    }

    fn ncols(&self) -> usize {
        self.len()
    }

    fn apply(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        match self.dense() {
            Some(c) => {
                check_rows(c.ncols(), x)?;
                Ok(c * x)
            }
            None => PreconditionedSystem::apply(self, x),
        }
    }

    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        match self.dense() {
            Some(c) => {
                check_rows(c.nrows(), x)?;
                Ok(c.adjoint() * x)
            }
            None => PreconditionedSystem::apply_adjoint(self, x),
        }
    }
}

/// `A - C_c` for a square operator `A` and a circulant `C_c`.
#[derive(Debug, Clone, Copy)]
pub struct CirculantDifference<'a, A> {
    pub operator: &'a A,
    pub circulant: &'a Circulant,
}

impl<A: LinearOperator> LinearOperator for CirculantDifference<'_, A> {
    fn nrows(&self) -> usize {
        self.operator.nrows()
    }

    fn ncols(&self) -> usize {
        self.operator.ncols()
    }

    fn apply(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let a = self.operator.apply(x)?;
        let c = circulant_columns(self.circulant, x, false)?;
        Ok(a - c)
    }

    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let a = self.operator.apply_adjoint(x)?;
        let c = circulant_columns(&self.circulant.adjoint(), x, false)?;
        Ok(a - c)
    }
}

fn check_rows(expected: usize, x: MatRef<'_, c64>) -> Result<()> {
    if x.nrows() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: x.nrows(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonConfig {
    /// Relative truncation threshold.
    pub eps: f64,
    pub block: usize,
    pub oversampling: usize,
    pub power_iterations: usize,
    pub seed: u64,
    /// Largest accepted rank; `None` means the matrix size.
    pub max_rank: Option<usize>,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        Self {
            eps: 1e-10,
            block: 32,
            oversampling: 10,
            power_iterations: 1,
            seed: 0x5eed,
            max_rank: None,
        }
    }
}

impl SkeletonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.block == 0 {
            return Err(Error::InvalidInput("block size must be positive".into()));
        }
        Ok(())
    }
}

/// What the compression found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    /// Columns of the range basis `Q`.
    pub basis_size: usize,
    /// Operator applications (forward and adjoint), counted in columns.
    pub applied_columns: usize,
    pub sigma_max: f64,
    /// Largest discarded singular value of `B`, relative to `sigma_max`.
    pub truncation: f64,
    /// Residual probe `max ‖(I - QQᴴ) A ω‖ / ‖ω‖` of the last block.
    pub residual_probe: f64,
}

/// `A ≈ U Vᵀ` with `U = Q Ũ_r Σ_r` and `V = conj(W_r)`.
#[derive(Debug, Clone)]
pub struct SkeletonFactorization {
    pub u: Mat<c64>,
    pub v: Mat<c64>,
    pub singular_values: Vec<f64>,
    pub report: RankReport,
}

impl SkeletonFactorization {
    pub fn rank(&self) -> usize {
        self.u.ncols()
    }

    /// `U Vᵀ x`.
    pub fn apply(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        &self.u * (self.v.transpose() * x)
    }

    pub fn to_dense(&self) -> Mat<c64> {
        &self.u * self.v.transpose()
    }
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<c64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re * scale, im * scale)
    })
}

/// `y - Q (Qᴴ y)`, twice.
fn project_out(q: &Mat<c64>, y: &mut Mat<c64>) {
    if q.ncols() == 0 {
        return;
    }
    for _ in 0..2 {
        let c = q.adjoint() * &*y;
        *y -= q * &c;
    }
}

fn orthonormal(y: MatRef<'_, c64>) -> Mat<c64> {
    y.qr().compute_thin_Q()
}

fn hstack(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    let n = a.ncols();
    Mat::from_fn(a.nrows(), n + b.ncols(), |i, j| {
        if j < n {
            a[(i, j)]
        } else {
            b[(i, j - n)]
        }
    })
}

/// Compresses `op` to relative accuracy `eps`.
pub fn skeletonize<A: LinearOperator + ?Sized>(op: &A, config: &SkeletonConfig) -> Result<SkeletonFactorization> {
    config.validate()?;
    let (m, n) = (op.nrows(), op.ncols());
    let full = m.min(n);
    let cap = config.max_rank.unwrap_or(full).min(full);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut q = Mat::<c64>::zeros(m, 0);
    let mut applied = 0usize;
    let mut sigma_max = 0.0f64;
    let mut probe;
    loop {
        let b = config.block.min(full - q.ncols()).max(1);
        let omega = gaussian(&mut rng, n, b);
        let mut y = op.apply(omega.as_ref())?;
        applied += b;
        // residual of the fresh sketch against the current basis
        let mut resid = y.clone();
        project_out(&q, &mut resid);
        probe = (0..b)
            .map(|j| resid.col(j).norm_l2() / omega.col(j).norm_l2())
            .fold(0.0, f64::max);
        for j in 0..b {
            sigma_max = sigma_max.max(y.col(j).norm_l2() / omega.col(j).norm_l2());
        }
        for _ in 0..config.power_iterations {
            project_out(&q, &mut y);
            let z = op.apply_adjoint(orthonormal(y.as_ref()).as_ref())?;
            y = op.apply(orthonormal(z.as_ref()).as_ref())?;
            applied += 2 * b;
        }
        project_out(&q, &mut y);
        let qb = orthonormal(y.as_ref());
        q = hstack(&q, &qb);

        // current ε-rank from the projected matrix
        let bmat = op.apply_adjoint(q.as_ref())?.adjoint().to_owned();
        applied += q.ncols();
        let s = bmat
            .singular_values()
            .map_err(|e| Error::Linalg(format!("SVD did not converge: {e:?}")))?;
        sigma_max = sigma_max.max(s.first().copied().unwrap_or(0.0));
        let r = s.iter().filter(|&&v| v > config.eps * sigma_max).count();
        if r > cap {
            return Err(Error::InsufficientDecay { rank: r, cap });
        }
        let done = sigma_max == 0.0
            || (probe <= config.eps * sigma_max && r + config.oversampling <= q.ncols());
        if done || q.ncols() >= full {
            return finish(bmat, q, config, cap, applied, sigma_max, probe);
        }
    }
}

fn finish(
    bmat: Mat<c64>,
    q: Mat<c64>,
    config: &SkeletonConfig,
    cap: usize,
    applied: usize,
    sigma_max: f64,
    probe: f64,
) -> Result<SkeletonFactorization> {
    let svd = bmat
        .thin_svd()
        .map_err(|e| Error::Linalg(format!("SVD did not converge: {e:?}")))?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|v| v.re).collect();
    let smax = s.first().copied().unwrap_or(0.0).max(sigma_max);
    let r = s.iter().filter(|&&v| v > config.eps * smax).count();
    if r > cap {
        return Err(Error::InsufficientDecay { rank: r, cap });
    }
    let ut = svd.U();
    let w = svd.V();
    let qu = &q * ut.subcols(0, r);
    let u = Mat::from_fn(qu.nrows(), r, |i, j| qu[(i, j)] * s[j]);
    let v = Mat::from_fn(w.nrows(), r, |i, j| w[(i, j)].conj());
    let truncation = if r < s.len() && smax > 0.0 { s[r] / smax } else { 0.0 };
    Ok(SkeletonFactorization {
        u,
        v,
        singular_values: s[..r].to_vec(),
        report: RankReport {
            rank: r,
            basis_size: q.ncols(),
            applied_columns: applied,
            sigma_max: smax,
            truncation,
            residual_probe: probe,
        },
    })
}
