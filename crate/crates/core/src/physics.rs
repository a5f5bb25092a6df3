//! Excitations, the circular-cylinder reference solution, far fields and
//! Fourier-ordered singular spectra.
//!
//! Time convention `e^{-iωt}`. For TE incidence the only magnetic component
//! is `H_z`; a plane wave travelling along `k̂ = (cos φ_i, sin φ_i)` is
//! `H_z = A e^{ik k̂·r}` and its tangential electric field on a contour with
//! exterior normal `n̂` is `E_t = η H_z (k̂·n̂)`.
//!
//! The unknown `j` of the preconditioned system equals `-H_z` (total field)
//! on the contour; the physical surface current `J_t = H_z` is therefore
//! `-j`, see [`SurfaceCurrentSolution::surface_current`].

use std::f64::consts::PI;

use faer::{Mat, MatRef};
use rustfft::FftPlanner;

use crate::bem::{Assembler, ElementPoint};
use crate::quadrature::gauss_legendre;
use crate::specfun::bessel_jy;
use crate::{c64, Error, Result};

/// Homogeneous exterior medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    pub permittivity: f64,
    pub permeability: f64,
}

impl Medium {
    pub const VACUUM: Medium = Medium {
        permittivity: 8.854_187_812_8e-12,
        permeability: 1.256_637_062_12e-6,
    };

    pub fn impedance(&self) -> f64 {
        (self.permeability / self.permittivity).sqrt()
    }

    /// `k = ω √(με)` for a frequency in hertz.
    pub fn wavenumber(&self, frequency: f64) -> f64 {
        2.0 * PI * frequency * (self.permeability * self.permittivity).sqrt()
    }
}

/// Plane wave `H_z = A e^{ik k̂·r}` with `k̂ = (cos angle, sin angle)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    /// Direction of propagation in radians.
    pub angle: f64,
    pub amplitude: c64,
}

impl PlaneWave {
    pub fn new(angle: f64) -> Self {
        Self {
            angle,
            amplitude: c64::new(1.0, 0.0),
        }
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }

    pub fn magnetic(&self, k: f64, x: [f64; 2]) -> c64 {
        let d = self.direction();
        self.amplitude * c64::new(0.0, k * (d[0] * x[0] + d[1] * x[1])).exp()
    }

    /// Tangential electric field for the counterclockwise tangent.
    pub fn electric_tangential(&self, k: f64, impedance: f64, x: [f64; 2], normal: [f64; 2]) -> c64 {
        let d = self.direction();
        self.magnetic(k, x) * (impedance * (d[0] * normal[0] + d[1] * normal[1]))
    }
}

/// Gauss points of every element of a mesh, for projections of incident
/// fields and far-field integrals of hat-function expansions.
#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    elements: Vec<Vec<ElementPoint>>,
}

impl SurfaceQuadrature {
    pub fn new(assembler: &Assembler<'_>) -> Self {
        let n = assembler.mesh().len();
        Self {
            elements: (0..n).map(|e| assembler.element_quadrature(e)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn accumulate<F: FnMut(&ElementPoint) -> c64>(&self, out: &mut [c64], mut f: F) {
        let n = self.len();
        for (e, pts) in self.elements.iter().enumerate() {
            for p in pts {
                let v = f(p) * p.weight;
                out[e] += v * (1.0 - p.sigma);
                out[(e + 1) % n] += v * p.sigma;
            }
        }
    }

    /// Galerkin projections `e_i = ∫ λ_i E_t`, `h_i = ∫ λ_i H_z`, one
    /// column per wave.
    pub fn project_excitation(&self, k: f64, impedance: f64, waves: &[PlaneWave]) -> (Mat<c64>, Mat<c64>) {
        let n = self.len();
        let mut e = Mat::zeros(n, waves.len());
        let mut h = Mat::zeros(n, waves.len());
        let mut ecol = vec![c64::new(0.0, 0.0); n];
        let mut hcol = vec![c64::new(0.0, 0.0); n];
        for (w, wave) in waves.iter().enumerate() {
            ecol.fill(c64::new(0.0, 0.0));
            hcol.fill(c64::new(0.0, 0.0));
            self.accumulate(&mut ecol, |p| wave.electric_tangential(k, impedance, p.position, p.normal));
            self.accumulate(&mut hcol, |p| wave.magnetic(k, p.position));
            for i in 0..n {
                e[(i, w)] = ecol[i];
                h[(i, w)] = hcol[i];
            }
        }
        (e, h)
    }

    /// Far-field pattern `F(φ)` of the scattered `H_z ~ F e^{ikr}/√r` for
    /// the system unknown `j` (nodal values of the hat expansion).
    pub fn far_field(&self, k: f64, j: &[c64], angles: &[f64]) -> Result<Vec<c64>> {
        let n = self.len();
        if j.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: j.len(),
            });
        }
        let pref = -(k / 4.0) * (2.0 / (PI * k)).sqrt() * c64::from_polar(1.0, -PI / 4.0);
        Ok(angles
            .iter()
            .map(|&phi| {
                let r = [phi.cos(), phi.sin()];
                let mut acc = c64::new(0.0, 0.0);
                for (e, pts) in self.elements.iter().enumerate() {
                    let (a, b) = (j[e], j[(e + 1) % n]);
                    for p in pts {
                        let dot_n = r[0] * p.normal[0] + r[1] * p.normal[1];
                        let phase = c64::new(0.0, -k * (r[0] * p.position[0] + r[1] * p.position[1])).exp();
                        let jv = a * (1.0 - p.sigma) + b * p.sigma;
                        acc += phase * jv * (dot_n * p.weight);
                    }
                }
                pref * acc
            })
            .collect())
    }
}

/// Echo width `2π|F|²` in dB·m.
pub fn echo_width_db(far_field: c64) -> f64 {
    10.0 * (2.0 * PI * far_field.norm_sqr()).log10()
}

/// Solution of the preconditioned system at the mesh nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCurrentSolution {
    pub arclengths: Vec<f64>,
    pub coefficients: Vec<c64>,
}

impl SurfaceCurrentSolution {
    /// `J_t = H_z` on the contour.
    pub fn surface_current(&self) -> Vec<c64> {
        self.coefficients.iter().map(|c| -c).collect()
    }

    /// Relative `L²(Γ)` distance between the piecewise-linear `J_t` and
    /// `reference(s)`, with a Gauss rule of `points` nodes per element.
    pub fn relative_l2_error<F: Fn(f64) -> c64>(&self, perimeter: f64, reference: F, points: usize) -> f64 {
        let n = self.coefficients.len();
        let h = perimeter / n as f64;
        let rule = gauss_legendre::<f64>(points);
        let (mut num, mut den) = (0.0, 0.0);
        for e in 0..n {
            let (a, b) = (-self.coefficients[e], -self.coefficients[(e + 1) % n]);
            for (x, w) in rule.iter() {
                let r = reference(self.arclengths[e] + h * x);
                num += w * (a * (1.0 - x) + b * x - r).norm_sqr();
                den += w * r.norm_sqr();
            }
        }
        (num / den).sqrt()
    }

    /// Relative `ℓ²` distance between nodal values of `J_t` and `reference`.
    pub fn relative_nodal_error<F: Fn(f64) -> c64>(&self, reference: F) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (c, &s) in self.coefficients.iter().zip(&self.arclengths) {
            let r = reference(s);
            num += (-c - r).norm_sqr();
            den += r.norm_sqr();
        }
        (num / den).sqrt()
    }
}

/// Cylindrical-harmonic series of the scattering by a PEC circle.
#[derive(Debug, Clone)]
pub struct CircleSeries {
    pub radius: f64,
    pub k: f64,
    /// `H_m^(1)'(ka)` for `m = 0..=order`.
    dh: Vec<c64>,
    /// `J_m'(ka)`.
    dj: Vec<f64>,
}

impl CircleSeries {
    /// Truncates at `ka + 4 (ka)^{1/3} + 25` and checks that the last term
    /// is negligible.
    pub fn new(radius: f64, k: f64) -> Result<Self> {
        if !(radius > 0.0 && k > 0.0 && radius.is_finite() && k.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "circle series needs radius > 0 and k > 0, got {radius}, {k}"
            )));
        }
        let x = k * radius;
        let order = (x + 4.0 * x.cbrt() + 25.0).ceil() as usize;
        let (jv, yv) = bessel_jy(order + 1, x)?;
        let deriv = |v: &[f64], m: usize| {
            if m == 0 {
                -v[1]
            } else {
                0.5 * (v[m - 1] - v[m + 1])
            }
        };
        let dj: Vec<f64> = (0..=order).map(|m| deriv(&jv, m)).collect();
        let dh: Vec<c64> = (0..=order)
            .map(|m| c64::new(dj[m], deriv(&yv, m)))
            .collect();
        let head = 1.0 / dh.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min);
        let tail = 1.0 / dh[order].norm();
        if !(tail <= 1e-16 * head) {
            return Err(Error::SeriesNotConverged { order });
        }
        Ok(Self { radius, k, dh, dj })
    }

    pub fn order(&self) -> usize {
        self.dh.len() - 1
    }

    /// `J_t(φ) = H_z(a, φ)` for incidence along `incidence` radians.
    pub fn surface_current(&self, incidence: f64, phi: f64) -> c64 {
        let x = self.k * self.radius;
        let psi = phi - incidence;
        let mut acc = c64::new(0.0, 0.0);
        let mut im = c64::new(1.0, 0.0);
        for (m, dh) in self.dh.iter().enumerate() {
            let w = if m == 0 { 1.0 } else { 2.0 * (m as f64 * psi).cos() };
            acc += im * w / dh;
            im *= c64::new(0.0, 1.0);
        }
        acc * c64::new(0.0, 2.0 / (PI * x))
    }

    /// Far-field pattern `F(φ)`.
    pub fn far_field(&self, incidence: f64, phi: f64) -> c64 {
        let psi = phi - incidence;
        let mut acc = c64::new(0.0, 0.0);
        for (m, (dh, dj)) in self.dh.iter().zip(&self.dj).enumerate() {
            let a = -*dj / dh;
            let w = if m == 0 { 1.0 } else { 2.0 * (m as f64 * psi).cos() };
            acc += a * w;
        }
        acc * (2.0 / (PI * self.k)).sqrt() * c64::from_polar(1.0, -PI / 4.0)
    }
}

/// Reference surface current `J_t = H_z` on a PEC circle.
pub fn reference_circle_current(radius: f64, k: f64, incidence: f64, angles: &[f64]) -> Result<Vec<c64>> {
    let series = CircleSeries::new(radius, k)?;
    Ok(angles
        .iter()
        .map(|&phi| series.surface_current(incidence, phi))
        .collect())
}

/// Singular value tagged by the dominant Fourier mode of its left singular
/// vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralComponent {
    pub mode: usize,
    pub sigma: f64,
}

/// Full SVD of `a`; each left singular vector is assigned the mode
/// `m ∈ [0, N/2]` maximizing `|û_m|² + |û_{N-m}|²`. Sorted by mode, then by
/// decreasing singular value.
pub fn fourier_ordered_spectrum(a: MatRef<'_, c64>) -> Result<Vec<SpectralComponent>> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::InvalidInput(format!(
            "spectrum needs a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let svd = a
        .svd()
        .map_err(|e| Error::Linalg(format!("SVD did not converge: {e:?}")))?;
    let u = svd.U();
    let s = svd.S().column_vector();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut buf = vec![c64::new(0.0, 0.0); n];
    let mut out = Vec::with_capacity(n);
    for c in 0..n {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = u[(i, c)];
        }
        fft.process(&mut buf);
        let mut best = (0usize, -1.0f64);
        for m in 0..=n / 2 {
            let mut p = buf[m].norm_sqr();
            if m != 0 && 2 * m != n {
                p += buf[n - m].norm_sqr();
            }
            if p > best.1 {
                best = (m, p);
            }
        }
        out.push(SpectralComponent {
            mode: best.0,
            sigma: s[c].re,
        });
    }
    out.sort_by(|x, y| x.mode.cmp(&y.mode).then(y.sigma.total_cmp(&x.sigma)));
    Ok(out)
}

/// Largest singular value over the top `fraction` of mode indices, next to
/// the overall largest one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumTail {
    pub tail_max: f64,
    pub global_max: f64,
}

impl SpectrumTail {
    pub fn ratio(&self) -> f64 {
        self.tail_max / self.global_max
    }
}

/// `n` is the matrix size; the tail holds modes `m ≥ (1 - fraction) n/2`.
pub fn spectrum_tail(spectrum: &[SpectralComponent], n: usize, fraction: f64) -> SpectrumTail {
    let start = (1.0 - fraction) * (n / 2) as f64;
    let mut tail_max = 0.0f64;
    let mut global_max = 0.0f64;
    for c in spectrum {
        global_max = global_max.max(c.sigma);
        if c.mode as f64 >= start {
            tail_max = tail_max.max(c.sigma);
        }
    }
    SpectrumTail { tail_max, global_max }
}

/// Singular values of `a` in decreasing order.
pub fn singular_values(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    a.singular_values()
        .map_err(|e| Error::Linalg(format!("SVD did not converge: {e:?}")))
}

/// Number of singular values above `eps` times the largest.
pub fn numerical_rank(singular_values: &[f64], eps: f64) -> usize {
    let max = singular_values.iter().copied().fold(0.0, f64::max);
    singular_values.iter().filter(|&&s| s > eps * max).count()
}
