//! Circulant matrices represented by their DFT symbol.
//!
//! Convention: the symbol of the circulant with first column `c` is
//! `λ_m = Σ_j c_j e^{-2πi mj/N}` (unnormalized forward DFT); the inverse DFT
//! carries the factor `1/N`. The matrix is `M_ij = c_{(i - j) mod N}` and
//! `M x = IDFT(λ ⊙ DFT(x))`.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::bem::{gram_matrix, Assembler, OperatorKind, QuadratureConfig};
use crate::{c64, Contour, Error, Result, Scalar, UniformMesh, Wavenumber};

/// Default threshold on `min |λ| / max |λ|` below which solves are refused.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct CirculantOperator<T: Scalar> {
    symbol: Vec<Complex<T>>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> fmt::Debug for CirculantOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CirculantOperator")
            .field("len", &self.symbol.len())
            .finish()
    }
}

impl<T: Scalar> CirculantOperator<T> {
    pub fn from_symbol(symbol: Vec<Complex<T>>) -> Result<Self> {
        if symbol.is_empty() {
            return Err(Error::InvalidInput("empty circulant symbol".into()));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(symbol.len());
        let inverse = planner.plan_fft_inverse(symbol.len());
        Ok(Self {
            symbol,
            forward,
            inverse,
        })
    }

    pub fn from_first_column(column: &[Complex<T>]) -> Result<Self> {
        let mut symbol = column.to_vec();
        if symbol.is_empty() {
            return Err(Error::InvalidInput("empty circulant column".into()));
        }
        FftPlanner::new()
            .plan_fft_forward(symbol.len())
            .process(&mut symbol);
        Self::from_symbol(symbol)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_symbol(vec![Complex::new(T::one(), T::zero()); n])
    }

    pub fn len(&self) -> usize {
        self.symbol.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbol.is_empty()
    }

    pub fn symbol(&self) -> &[Complex<T>] {
        &self.symbol
    }

    /// Circulant with symbol `f(λ_m)` for each mode.
    pub fn map_symbol<F: FnMut(Complex<T>) -> Complex<T>>(&self, f: F) -> Self {
        Self {
            symbol: self.symbol.iter().copied().map(f).collect(),
            forward: self.forward.clone(),
            inverse: self.inverse.clone(),
        }
    }

    /// Conjugate transpose, whose symbol is the complex conjugate.
    pub fn adjoint(&self) -> Self {
        self.map_symbol(|l| l.conj())
    }

    pub fn first_column(&self) -> Vec<Complex<T>> {
        let mut c = self.symbol.clone();
        self.inverse.process(&mut c);
        let scale = T::one() / T::from_usize(c.len()).unwrap();
        c.iter_mut().for_each(|v| *v = *v * scale);
        c
    }

    /// Dense rows, for tests and small problems.
    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        let c = self.first_column();
        let n = c.len();
        (0..n)
            .map(|i| (0..n).map(|j| c[(i + n - j) % n]).collect())
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let n = self.len();
        if len == 0 || len % n != 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
        Ok(())
    }

    fn spectral(&self, data: &mut [Complex<T>], mut f: impl FnMut(usize, Complex<T>) -> Complex<T>) {
        let n = self.len();
        self.forward.process(data);
        for col in data.chunks_mut(n) {
            for (m, v) in col.iter_mut().enumerate() {
                *v = f(m, *v);
            }
        }
        self.inverse.process(data);
        let scale = T::one() / T::from_usize(n).unwrap();
        data.iter_mut().for_each(|v| *v = *v * scale);
    }

    /// `M x` in place. `data` may hold several vectors stored back to back,
    /// which are transformed as one batch.
    pub fn apply_in_place(&self, data: &mut [Complex<T>]) -> Result<()> {
        self.check_len(data.len())?;
        self.spectral(data, |m, v| v * self.symbol[m]);
        Ok(())
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut y = x.to_vec();
        self.apply_in_place(&mut y)?;
        Ok(y)
    }

    /// Fails with [`Error::NearSingularSymbol`] if
    /// `min |λ| ≤ tol · max |λ|`.
    pub fn check_invertible(&self, tol: T) -> Result<()> {
        let max = self.symbol.iter().fold(T::zero(), |m, l| m.max(l.norm()));
        let (mode, min) = self
            .symbol
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |(bm, bv), (m, l)| {
                if l.norm() < bv {
                    (m, l.norm())
                } else {
                    (bm, bv)
                }
            });
        if !(min > tol * max) {
            let ratio = if max > T::zero() { min / max } else { T::zero() };
            return Err(Error::NearSingularSymbol {
                mode,
                ratio: ratio.to_f64().unwrap_or(0.0),
            });
        }
        Ok(())
    }

    /// `M⁻¹ b` in place, batched like [`Self::apply_in_place`].
    pub fn solve_in_place(&self, data: &mut [Complex<T>]) -> Result<()> {
        self.check_len(data.len())?;
        self.check_invertible(T::from_f64(DEFAULT_SINGULAR_TOL).unwrap())?;
        self.spectral(data, |m, v| v / self.symbol[m]);
        Ok(())
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.check_invertible(T::from_f64(DEFAULT_SINGULAR_TOL).unwrap())?;
        Ok(self.map_symbol(|l| l.inv()))
    }

    /// CSV with columns `mode,re,im,abs`.
    pub fn write_symbol_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "mode,re,im,abs")?;
        for (m, l) in self.symbol.iter().enumerate() {
            writeln!(out, "{m},{:e},{:e},{:e}", l.re, l.im, l.norm())?;
        }
        Ok(())
    }
}

/// Symbol of `C_c = (G/2 + D̃) G⁻¹ (G/2 - D) + S̃ G⁻¹ N`, mode by mode.
pub fn compose_cc_symbol<T: Scalar>(
    s_tilde: &CirculantOperator<T>,
    d_tilde: &CirculantOperator<T>,
    d: &CirculantOperator<T>,
    n: &CirculantOperator<T>,
    g: &CirculantOperator<T>,
) -> Result<CirculantOperator<T>> {
    let len = g.len();
    for op in [s_tilde, d_tilde, d, n] {
        if op.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: op.len(),
            });
        }
    }
    g.check_invertible(T::from_f64(DEFAULT_SINGULAR_TOL).unwrap())?;
    let half = T::from_f64(0.5).unwrap();
    let symbol = (0..len)
        .map(|m| {
            let sg = g.symbol[m];
            let left = sg * half + d_tilde.symbol[m];
            let right = sg * half - d.symbol[m];
            (left * right + s_tilde.symbol[m] * n.symbol[m]) / sg
        })
        .collect();
    CirculantOperator::from_symbol(symbol)
}

/// Circulant operator of `kind` on the `n`-node uniform mesh of a circle.
/// One row is assembled with the boundary element quadrature and the matrix
/// is completed by rotational symmetry.
pub fn circle_operator(
    kind: OperatorKind,
    radius: f64,
    n: usize,
    k: Option<Wavenumber>,
    config: QuadratureConfig,
) -> Result<CirculantOperator<f64>> {
    let contour = Contour::circle(radius)?;
    let mesh = UniformMesh::new(&contour, n)?;
    if kind == OperatorKind::Gram {
        return gram_circulant(&mesh);
    }
    let k = k.ok_or_else(|| Error::InvalidInput(format!("{kind:?} needs a wavenumber")))?;
    let asm = Assembler::new(&contour, &mesh, config)?;
    let row = asm.assemble_row(&[(kind, k)], 0)?;
    from_first_row(&row[0])
}

fn from_first_row(row: &[c64]) -> Result<CirculantOperator<f64>> {
    let n = row.len();
    let column: Vec<c64> = (0..n).map(|j| row[(n - j) % n]).collect();
    CirculantOperator::from_first_column(&column)
}

fn gram_circulant(mesh: &UniformMesh) -> Result<CirculantOperator<f64>> {
    let g = gram_matrix(mesh);
    let n = mesh.len();
    let column: Vec<c64> = (0..n).map(|i| g.entries[(i, 0)]).collect();
    CirculantOperator::from_first_column(&column)
}

/// The five circle operators entering `C_c`.
#[derive(Debug, Clone)]
pub struct CircleOperators {
    pub single_layer_tilde: CirculantOperator<f64>,
    pub double_layer_tilde: CirculantOperator<f64>,
    pub double_layer: CirculantOperator<f64>,
    pub hypersingular: CirculantOperator<f64>,
    pub gram: CirculantOperator<f64>,
}

impl CircleOperators {
    /// Assembles `S̃`, `D̃` (at `k_tilde`), `D`, `N` (at `k`) and `G` on the
    /// `n`-node circle of the given radius from a single row sweep.
    pub fn assemble(
        radius: f64,
        n: usize,
        k: Wavenumber,
        k_tilde: Wavenumber,
        config: QuadratureConfig,
    ) -> Result<Self> {
        let contour = Contour::circle(radius)?;
        let mesh = UniformMesh::new(&contour, n)?;
        let asm = Assembler::new(&contour, &mesh, config)?;
        let rows = asm.assemble_row(
            &[
                (OperatorKind::SingleLayer, k_tilde),
                (OperatorKind::DoubleLayer, k_tilde),
                (OperatorKind::DoubleLayer, k),
                (OperatorKind::Hypersingular, k),
            ],
            0,
        )?;
        Ok(Self {
            single_layer_tilde: from_first_row(&rows[0])?,
            double_layer_tilde: from_first_row(&rows[1])?,
            double_layer: from_first_row(&rows[2])?,
            hypersingular: from_first_row(&rows[3])?,
            gram: gram_circulant(&mesh)?,
        })
    }

    pub fn compose(&self) -> Result<CirculantOperator<f64>> {
        compose_cc_symbol(
            &self.single_layer_tilde,
            &self.double_layer_tilde,
            &self.double_layer,
            &self.hypersingular,
            &self.gram,
        )
    }
}
