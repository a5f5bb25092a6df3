//! The preconditioned combined field system
//!
//! `C = (G/2 + D̃) G⁻¹ (G/2 - D) + S̃ G⁻¹ N`,
//! `b = -(ik/η) S̃ G⁻¹ e - (G/2 + D̃) G⁻¹ h`,
//!
//! where a tilde marks operators at the complex wavenumber
//! `k̃ = k + 0.4i k^{1/3} a^{-2/3}` and `G⁻¹` is applied through the Gram
//! circulant.

use faer::{Mat, MatRef};

use crate::bem::{gram_matrix, Assembler, GalerkinMatrix, OperatorKind, QuadratureConfig};
use crate::circulant::CirculantOperator;
use crate::geometry::RadiusAveraging;
use crate::{c64, Circulant, Contour, Error, Result, UniformMesh, Wavenumber, FREE_SPACE_IMPEDANCE};

/// `k + 0.4i k^{1/3} a^{-2/3}`.
pub fn ktilde(k: f64, a: f64) -> Result<Wavenumber> {
    if !(k > 0.0 && k.is_finite()) || !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "k~ needs k > 0 and a > 0, got k = {k}, a = {a}"
        )));
    }
    Wavenumber::new(c64::new(k, 0.4 * k.cbrt() * a.powf(-2.0 / 3.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub quadrature: QuadratureConfig,
    pub averaging: RadiusAveraging,
    /// Wave impedance η in ohms.
    pub impedance: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            averaging: RadiusAveraging::EquivalentCircle,
            impedance: FREE_SPACE_IMPEDANCE,
        }
    }
}

/// Assembled operators of the preconditioned system on one mesh.
#[derive(Debug, Clone)]
pub struct PreconditionedSystem {
    pub k: f64,
    pub k_tilde: Wavenumber,
    pub impedance: f64,
    pub single_layer_tilde: GalerkinMatrix,
    pub double_layer_tilde: GalerkinMatrix,
    pub double_layer: GalerkinMatrix,
    pub hypersingular: GalerkinMatrix,
    pub gram: GalerkinMatrix,
    pub gram_circulant: Circulant,
    dense: Option<Mat<c64>>,
}

impl PreconditionedSystem {
    /// Assembles `S̃`, `D̃`, `D`, `N` and `G`; `C` itself is formed on
    /// demand by [`Self::form_dense`].
    pub fn assemble(contour: &Contour, mesh: &UniformMesh, k: f64, config: &SystemConfig) -> Result<Self> {
        let a = contour.curvature_stats(config.averaging).average_radius;
        let k_tilde = ktilde(k, a)?;
        let k_real = Wavenumber::real(k)?;
        let asm = Assembler::new(contour, mesh, config.quadrature)?;
        let mut mats = asm
            .assemble_many(&[
                (OperatorKind::SingleLayer, k_tilde),
                (OperatorKind::DoubleLayer, k_tilde),
                (OperatorKind::DoubleLayer, k_real),
                (OperatorKind::Hypersingular, k_real),
            ])?
            .into_iter();
        let mut next = || mats.next().unwrap();
        Self::from_operators(
            k,
            k_tilde,
            config.impedance,
            next(),
            next(),
            next(),
            next(),
            gram_matrix(mesh),
        )
    }

    /// Builds the system from given operator matrices.
    #[allow(clippy::too_many_arguments)]
    pub fn from_operators(
        k: f64,
        k_tilde: Wavenumber,
        impedance: f64,
        single_layer_tilde: GalerkinMatrix,
        double_layer_tilde: GalerkinMatrix,
        double_layer: GalerkinMatrix,
        hypersingular: GalerkinMatrix,
        gram: GalerkinMatrix,
    ) -> Result<Self> {
        let n = gram.len();
        for m in [&single_layer_tilde, &double_layer_tilde, &double_layer, &hypersingular] {
            if m.entries.nrows() != n || m.entries.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.entries.nrows(),
                });
            }
        }
        let column: Vec<c64> = (0..n).map(|i| gram.entries[(i, 0)]).collect();
        let gram_circulant = CirculantOperator::from_first_column(&column)?;
        Ok(Self {
            k,
            k_tilde,
            impedance,
            single_layer_tilde,
            double_layer_tilde,
            double_layer,
            hypersingular,
            gram,
            gram_circulant,
            dense: None,
        })
    }

    pub fn len(&self) -> usize {
        self.gram.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `G⁻¹ X` column by column through the Gram circulant.
    pub fn gram_solve(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        circulant_columns(&self.gram_circulant, x, true)
    }

    /// Forms and stores the dense `C`.
    pub fn form_dense(&mut self) -> Result<&Mat<c64>> {
        if self.dense.is_none() {
            let n = self.len();
            let x = self.gram_solve(self.double_layer.entries.as_ref())?;
            let y = self.gram_solve(self.hypersingular.entries.as_ref())?;
            let left = Mat::from_fn(n, n, |i, j| {
                self.gram.entries[(i, j)] * 0.5 + self.double_layer_tilde.entries[(i, j)]
            });
            let right = Mat::from_fn(n, n, |i, j| {
                let id = if i == j { c64::new(0.5, 0.0) } else { c64::new(0.0, 0.0) };
                id - x[(i, j)]
            });
            let c = &left * &right + &self.single_layer_tilde.entries * &y;
            self.dense = Some(c);
        }
        Ok(self.dense.as_ref().unwrap())
    }

    pub fn dense(&self) -> Option<&Mat<c64>> {
        self.dense.as_ref()
    }

    /// Drops the stored dense `C`.
    pub fn release_dense(&mut self) {
        self.dense = None;
    }

    /// `C X` without forming `C`: four dense products and two Gram solves.
    pub fn apply(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let n = self.len();
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.nrows(),
            });
        }
        // y1 = G⁻¹ (G/2 - D) x = x/2 - G⁻¹ D x, y2 = G⁻¹ N x
        let dx = &self.double_layer.entries * x;
        let gdx = self.gram_solve(dx.as_ref())?;
        let y1 = Mat::from_fn(n, x.ncols(), |i, j| x[(i, j)] * 0.5 - gdx[(i, j)]);
        let nx = &self.hypersingular.entries * x;
        let y2 = self.gram_solve(nx.as_ref())?;
        let gy1 = circulant_columns(&self.gram_circulant, y1.as_ref(), false)?;
        let out = &self.double_layer_tilde.entries * &y1 + &self.single_layer_tilde.entries * &y2;
        Ok(Mat::from_fn(n, x.ncols(), |i, j| out[(i, j)] + gy1[(i, j)] * 0.5))
    }

    /// `Cᴴ X` without forming `C`.
    pub fn apply_adjoint(&self, x: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let n = self.len();
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.nrows(),
            });
        }
        // G is real symmetric, so G⁻ᴴ = G⁻¹
        let dtx = self.double_layer_tilde.entries.adjoint() * x;
        let gdtx = self.gram_solve(dtx.as_ref())?;
        let u = Mat::from_fn(n, x.ncols(), |i, j| x[(i, j)] * 0.5 + gdtx[(i, j)]);
        let stx = self.single_layer_tilde.entries.adjoint() * x;
        let w = self.gram_solve(stx.as_ref())?;
        let gu = circulant_columns(&self.gram_circulant, u.as_ref(), false)?;
        let out = self.hypersingular.entries.adjoint() * &w - self.double_layer.entries.adjoint() * &u;
        Ok(Mat::from_fn(n, x.ncols(), |i, j| out[(i, j)] + gu[(i, j)] * 0.5))
    }

    /// Right-hand side for one excitation with projections `e`, `h`.
    pub fn rhs(&self, e: &[c64], h: &[c64]) -> Result<Vec<c64>> {
        let n = self.len();
        let em = Mat::from_fn(n, 1, |i, _| e[i]);
        let hm = Mat::from_fn(n, 1, |i, _| h[i]);
        if e.len() != n || h.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: e.len().min(h.len()),
            });
        }
        let b = self.rhs_many(em.as_ref(), hm.as_ref())?;
        Ok((0..n).map(|i| b[(i, 0)]).collect())
    }

    /// Right-hand sides for the columns of `e` and `h`.
    pub fn rhs_many(&self, e: MatRef<'_, c64>, h: MatRef<'_, c64>) -> Result<Mat<c64>> {
        let n = self.len();
        if e.nrows() != n || h.nrows() != n || e.ncols() != h.ncols() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: e.nrows(),
            });
        }
        let ge = self.gram_solve(e)?;
        let gh = self.gram_solve(h)?;
        let scale = -c64::new(0.0, self.k) / self.impedance;
        let se = &self.single_layer_tilde.entries * &ge;
        let dh = &self.double_layer_tilde.entries * &gh;
        Ok(Mat::from_fn(n, e.ncols(), |i, j| {
            se[(i, j)] * scale - (h[(i, j)] * 0.5 + dh[(i, j)])
        }))
    }
}

/// Applies (or solves with) a circulant on every column of `x`, using one
/// batched FFT.
pub(crate) fn circulant_columns(op: &Circulant, x: MatRef<'_, c64>, solve: bool) -> Result<Mat<c64>> {
    let n = x.nrows();
    let m = x.ncols();
    if m == 0 {
        return Ok(Mat::zeros(n, 0));
    }
    let mut buf = Vec::with_capacity(n * m);
    for j in 0..m {
        for i in 0..n {
            buf.push(x[(i, j)]);
        }
    }
    if solve {
        op.solve_in_place(&mut buf)?;
    } else {
        op.apply_in_place(&mut buf)?;
    }
    Ok(Mat::from_fn(n, m, |i, j| buf[j * n + i]))
}
