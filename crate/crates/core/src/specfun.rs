//! Bessel and Hankel functions of the first kind for the 2D Helmholtz kernel.
//!
//! Only orders 0 and 1 are needed for complex arguments. Three evaluation
//! regions are used for `H_0^(1)` and `H_1^(1)`:
//!
//! * `|z| <= SERIES_RADIUS`: ascending power series for `J` and `Y`, except
//!   that above `|z| = SERIES_RADIUS / 2` it is only used for
//!   `Im z <= SERIES_MAX_IMAG` (the sum `J + iY` cancels like `exp(2 Im z)`);
//! * `|z| >= ASYMPTOTIC_RADIUS`: Hankel's asymptotic expansion, truncated at
//!   its smallest term;
//! * in between: Neumann's addition theorem, re-expanding around the point
//!   `z0` on the same ray at `|z0| = ASYMPTOTIC_RADIUS`.
//!
//! Arguments must lie in the closed upper half-plane.

use num_complex::Complex;

use crate::{Error, Result, Scalar};

pub const SERIES_RADIUS: f64 = 5.0;
pub const ASYMPTOTIC_RADIUS: f64 = 17.0;
pub const SERIES_MAX_IMAG: f64 = 2.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Wavenumber with nonnegative imaginary part (outgoing or damped waves
/// under the `exp(-iωt)` convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexWavenumber<T>(Complex<T>);

impl<T: Scalar> ComplexWavenumber<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        if value.im < T::zero() || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::DomainError {
                im: value.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self(value))
    }

    pub fn real(k: T) -> Result<Self> {
        Self::new(Complex::new(k, T::zero()))
    }

    pub fn value(&self) -> Complex<T> {
        self.0
    }
}

#[inline]
fn cst<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

/// `H_0^(1)(z)` and `H_1^(1)(z)` for `Im z >= 0`, `z != 0`.
pub fn hankel1_01<T: Scalar>(z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    if z.im < T::zero() {
        return Err(Error::DomainError {
            im: z.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    let r = z.norm();
    if r == T::zero() {
        return Err(Error::SingularArgument);
    }
    let series = r <= cst(0.5 * SERIES_RADIUS)
        || (r <= cst(SERIES_RADIUS) && z.im <= cst(SERIES_MAX_IMAG));
    if series {
        Ok(series_h01(z))
    } else if r >= cst(ASYMPTOTIC_RADIUS) {
        Ok(asymptotic_h01(z))
    } else {
        Ok(addition_h01(z))
    }
}

/// `H_order^(1)(z)` for order 0 or 1.
pub fn hankel1<T: Scalar>(order: u32, z: Complex<T>) -> Result<Complex<T>> {
    let (h0, h1) = hankel1_01(z)?;
    match order {
        0 => Ok(h0),
        1 => Ok(h1),
        _ => Err(Error::InvalidInput(format!(
            "complex-argument Hankel functions are available for orders 0 and 1, not {order}"
        ))),
    }
}

/// Free-space Green's function `(i/4) H_0^(1)(k d)` of the 2D Helmholtz
/// equation.
pub fn green_kernel<T: Scalar>(k: ComplexWavenumber<T>, distance: T) -> Result<Complex<T>> {
    if !(distance > T::zero()) {
        return Err(Error::SingularArgument);
    }
    let h0 = hankel1(0, k.value() * distance)?;
    Ok(Complex::new(T::zero(), cst(0.25)) * h0)
}

/// `J_0(z)` and `J_1(z)`: ascending series for `|z| <= SERIES_RADIUS / 2`,
/// Miller's recurrence beyond.
pub fn bessel_j01<T: Scalar>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    if z.norm() > cst(0.5 * SERIES_RADIUS) {
        let j = miller_bessel_j(z, 1);
        return (j[0], j[1]);
    }
    let q = -(z * z) * cst::<T>(0.25);
    let mut t = Complex::new(T::one(), T::zero());
    let mut u = t;
    let mut j0 = t;
    let mut j1 = u;
    let eps = T::epsilon() * cst(0.5);
    for k in 1..200 {
        let kf: T = T::from_usize(k).unwrap();
        t = t * q / (kf * kf);
        u = u * q / (kf * (kf + T::one()));
        j0 = j0 + t;
        j1 = j1 + u;
        if t.norm() <= eps * j0.norm() && u.norm() <= eps * j1.norm() {
            break;
        }
    }
    (j0, j1 * z * cst::<T>(0.5))
}

fn series_h01<T: Scalar>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let (h, _) = series_hj01(z);
    (h[0], h[1])
}

fn series_hj01<T: Scalar>(z: Complex<T>) -> ([Complex<T>; 2], [Complex<T>; 2]) {
    let q = -(z * z) * cst::<T>(0.25);
    let eps = T::epsilon() * cst(0.25);
    // t_k = (-z²/4)^k / (k!)², u_k = (-z²/4)^k / (k! (k+1)!)
    let mut t = Complex::new(T::one(), T::zero());
    let mut u = t;
    let mut j0 = t;
    let mut s1 = u;
    let mut y0_sum = Complex::new(T::zero(), T::zero());
    // Σ (H_k + H_{k+1}) u_k, starting with k = 0: H_0 + H_1 = 1
    let mut y1_sum = u;
    let mut harmonic = T::zero();
    for k in 1..200 {
        let kf: T = T::from_usize(k).unwrap();
        harmonic = harmonic + T::one() / kf;
        let next_harmonic = harmonic + T::one() / (kf + T::one());
        t = t * q / (kf * kf);
        u = u * q / (kf * (kf + T::one()));
        j0 = j0 + t;
        s1 = s1 + u;
        y0_sum = y0_sum + t * harmonic;
        y1_sum = y1_sum + u * (harmonic + next_harmonic);
        let scale = T::one() + next_harmonic;
        if (t.norm() * scale <= eps * j0.norm().max(y0_sum.norm()))
            && (u.norm() * scale <= eps * s1.norm().max(y1_sum.norm()))
        {
            break;
        }
    }
    let half_z = z * cst::<T>(0.5);
    let j1 = half_z * s1;
    let two_over_pi: T = cst::<T>(2.0) / T::PI();
    let log_term = half_z.ln() + cst::<T>(EULER_GAMMA);
    let y0 = (log_term * j0 - y0_sum) * two_over_pi;
    let y1 = (log_term * j1 - z.inv() - z * cst::<T>(0.25) * y1_sum) * two_over_pi;
    let i = Complex::new(T::zero(), T::one());
    ([j0 + i * y0, j1 + i * y1], [j0, j1])
}

/// `([H_0, H_1], [J_0, J_1])` at `z`, sharing the series work when `z` is
/// in the series region.
pub fn hankel_bessel_01<T: Scalar>(z: Complex<T>) -> Result<([Complex<T>; 2], [Complex<T>; 2])> {
    let r = z.norm();
    if r > T::zero() && z.im >= T::zero() && r <= cst(0.5 * SERIES_RADIUS) {
        return Ok(series_hj01(z));
    }
    let (h0, h1) = hankel1_01(z)?;
    let (j0, j1) = bessel_j01(z);
    Ok(([h0, h1], [j0, j1]))
}

fn asymptotic_h01<T: Scalar>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let i = Complex::new(T::zero(), T::one());
    let w = i / z;
    let eps = T::epsilon() * cst(0.25);
    let mut a0 = T::one();
    let mut a1 = T::one();
    let mut p = Complex::new(T::one(), T::zero());
    let mut sum0 = p;
    let mut sum1 = p;
    let mut last0 = T::infinity();
    let mut last1 = T::infinity();
    let mut active0 = true;
    let mut active1 = true;
    for k in 1..80 {
        let kf: T = T::from_usize(k).unwrap();
        let odd = cst::<T>(2.0) * kf - T::one();
        let denom = cst::<T>(8.0) * kf;
        a0 = a0 * (-(odd * odd)) / denom;
        a1 = a1 * (cst::<T>(4.0) - odd * odd) / denom;
        p = p * w;
        if active0 {
            let term = p * a0;
            let mag = term.norm();
            if mag > last0 {
                active0 = false;
            } else {
                sum0 = sum0 + term;
                last0 = mag;
                if mag <= eps * sum0.norm() {
                    active0 = false;
                }
            }
        }
        if active1 {
            let term = p * a1;
            let mag = term.norm();
            if mag > last1 {
                active1 = false;
            } else {
                sum1 = sum1 + term;
                last1 = mag;
                if mag <= eps * sum1.norm() {
                    active1 = false;
                }
            }
        }
        if !active0 && !active1 {
            break;
        }
    }
    let quarter_pi = T::FRAC_PI_4();
    let prefactor = (Complex::new(cst::<T>(2.0) / T::PI(), T::zero()) / z).sqrt()
        * (i * (z - quarter_pi)).exp();
    (prefactor * sum0, prefactor * sum1 * (-i))
}

/// Neumann addition theorem around `z0 = z |z0| / |z|`:
/// `H_0(z0 - v) = H_0(z0) J_0(v) + 2 Σ H_k(z0) J_k(v)`,
/// `H_1(z0 - v) = H_1(z0) J_0(v) + Σ (H_{k+1}(z0) - H_{k-1}(z0)) J_k(v)`.
fn addition_h01<T: Scalar>(z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let r = z.norm();
    let z0 = z * (cst::<T>(ASYMPTOTIC_RADIUS) / r);
    let v = z0 - z;
    let vr = v.norm();
    let ratio = (vr / cst::<T>(ASYMPTOTIC_RADIUS)).to_f64().unwrap();
    // terms decay like ratio^k once k exceeds |z0|
    let needed = (ASYMPTOTIC_RADIUS + 40.0 / (-ratio.ln()).max(0.05)).ceil() as usize;
    let kmax = needed.clamp(20, 400);
    let (h0, h1) = asymptotic_h01(z0);
    let mut hankel = Vec::with_capacity(kmax + 2);
    hankel.push(h0);
    hankel.push(h1);
    let two_over_z0 = z0.inv() * cst::<T>(2.0);
    for k in 1..=kmax {
        let kf: T = T::from_usize(k).unwrap();
        let next = two_over_z0 * kf * hankel[k] - hankel[k - 1];
        hankel.push(next);
    }
    let j = miller_bessel_j(v, kmax);
    let mut sum0 = hankel[0] * j[0];
    let mut sum1 = hankel[1] * j[0];
    for k in 1..=kmax {
        sum0 = sum0 + hankel[k] * j[k] * cst::<T>(2.0);
        sum1 = sum1 + (hankel[k + 1] - hankel[k - 1]) * j[k];
    }
    (sum0, sum1)
}

/// `J_0(v), ..., J_n(v)` by Miller's backward recurrence, normalized with
/// `exp(∓iv) = J_0 + 2 Σ (∓i)^k J_k`, the sign chosen so the normalization
/// sum does not cancel.
fn miller_bessel_j<T: Scalar>(v: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; n + 1];
    let vr = v.norm();
    if vr <= T::min_positive_value().sqrt() {
        out[0] = Complex::new(T::one(), T::zero());
        return out;
    }
    let big = (n as f64).max(vr.to_f64().unwrap());
    let start = ((big + 20.0 + (40.0 * big).sqrt()) as usize) | 1;
    let mut f = vec![zero; start + 2];
    f[start] = Complex::new(cst::<T>(1e-30), T::zero());
    let two_over_v = v.inv() * cst::<T>(2.0);
    let rescale_at: T = cst(1e200);
    for k in (1..=start).rev() {
        let kf: T = T::from_usize(k).unwrap();
        f[k - 1] = two_over_v * kf * f[k] - f[k + 1];
        if f[k - 1].norm() > rescale_at {
            let s: T = cst(1e-200);
            for x in f.iter_mut().skip(k - 1) {
                *x = *x * s;
            }
        }
    }
    // bring magnitudes near one so the complex division below cannot overflow
    let peak = f.iter().fold(T::zero(), |m, x| m.max(x.norm()));
    for x in f.iter_mut() {
        *x = *x / peak;
    }
    let upper = v.im >= T::zero();
    // phase (∓i)^k cycles with period 4
    let unit = if upper {
        Complex::new(T::zero(), -T::one())
    } else {
        Complex::new(T::zero(), T::one())
    };
    let mut phase = Complex::new(T::one(), T::zero());
    let mut norm = f[0];
    for fk in f.iter().take(start + 1).skip(1) {
        phase = phase * unit;
        norm = norm + phase * *fk * cst::<T>(2.0);
    }
    let target = if upper {
        (-Complex::new(T::zero(), T::one()) * v).exp()
    } else {
        (Complex::new(T::zero(), T::one()) * v).exp()
    };
    let scale = target / norm;
    for (o, fk) in out.iter_mut().zip(f.iter()) {
        *o = *fk * scale;
    }
    out
}

/// `J_m(x)` and `Y_m(x)` for `m = 0..=max_order` and real `x > 0`.
///
/// `J` comes from Miller's backward recurrence normalized by
/// `1 = J_0 + 2 Σ J_2k`; `Y` from upward recurrence seeded with `Y_0`,
/// `Y_1`.
pub fn bessel_jy<T: Scalar>(max_order: usize, x: T) -> Result<(Vec<T>, Vec<T>)> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "bessel_jy needs a positive finite argument, got {x}"
        )));
    }
    let xf = x.to_f64().unwrap();
    let big = (max_order as f64).max(xf);
    let start = ((big + 20.0 + (40.0 * big).sqrt()) as usize) | 1;
    let mut f = vec![T::zero(); start + 2];
    f[start] = cst(1e-30);
    let two_over_x = cst::<T>(2.0) / x;
    for k in (1..=start).rev() {
        let kf = T::from_usize(k).unwrap();
        f[k - 1] = two_over_x * kf * f[k] - f[k + 1];
        if f[k - 1].abs() > cst(1e200) {
            for y in f.iter_mut().skip(k - 1) {
                *y = *y * cst(1e-200);
            }
        }
    }
    let mut norm = f[0];
    for fk in f.iter().skip(2).step_by(2) {
        norm = norm + cst::<T>(2.0) * *fk;
    }
    let j: Vec<T> = f.iter().take(max_order + 1).map(|&v| v / norm).collect();

    let (h0, h1) = hankel1_01(Complex::new(x, T::zero()))?;
    let mut y = Vec::with_capacity(max_order + 1);
    y.push(h0.im);
    if max_order >= 1 {
        y.push(h1.im);
    }
    for m in 1..max_order {
        let mf = T::from_usize(m).unwrap();
        let next = two_over_x * mf * y[m] - y[m - 1];
        if !next.is_finite() || next.abs() > cst(1e300) {
            return Err(Error::OutOfRange { order: m + 1, x: xf });
        }
        y.push(next);
    }
    Ok((j, y))
}

const TABLE_DEGREE: usize = 20;
const TABLE_START: f64 = 2.0;
const TABLE_MAX_WIDTH: f64 = 8.0;

/// Piecewise Chebyshev interpolant of `H_0(κd)` and `H_1(κd)` along the ray
/// `d ∈ [2/|κ|, max_distance]` for one wavenumber `κ`.
///
/// The smooth envelopes `H_n(κd) e^{-iκd}` are interpolated on panels in
/// `x = |κ| d` of width `min(x/2, 8)`, which keeps the branch point at the
/// origin well outside each panel's Bernstein ellipse. Distances outside the
/// table fall back to [`hankel1_01`].
#[derive(Debug, Clone)]
pub struct HankelTable<T> {
    kappa: Complex<T>,
    scale: T,
    breaks: Vec<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> HankelTable<T> {
    pub fn new(kappa: ComplexWavenumber<T>, max_distance: T) -> Result<Self> {
        let kappa = kappa.value();
        let scale = kappa.norm();
        if !(scale > T::zero()) || !(max_distance > T::zero()) {
            return Err(Error::InvalidInput(
                "Hankel table needs a nonzero wavenumber and a positive range".into(),
            ));
        }
        let x_max = scale * max_distance;
        let mut breaks = vec![cst::<T>(TABLE_START)];
        while *breaks.last().unwrap() < x_max {
            let x = *breaks.last().unwrap();
            breaks.push(x + (x * cst(0.5)).min(cst(TABLE_MAX_WIDTH)));
        }
        let n = TABLE_DEGREE;
        let nf = T::from_usize(n).unwrap();
        let nodes: Vec<T> = (0..n)
            .map(|j| (T::PI() * (T::from_usize(j).unwrap() + cst(0.5)) / nf).cos())
            .collect();
        let i = Complex::new(T::zero(), T::one());
        let mut coeffs = Vec::with_capacity(2 * n * (breaks.len() - 1));
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut vals = [Vec::with_capacity(n), Vec::with_capacity(n)];
            for &t in &nodes {
                let d = (a + b + (b - a) * t) * cst(0.5) / scale;
                let z = kappa * d;
                let (h0, h1) = hankel1_01(z)?;
                let envelope = (-i * z).exp();
                vals[0].push(h0 * envelope);
                vals[1].push(h1 * envelope);
            }
            for v in &vals {
                for k in 0..n {
                    let kf = T::from_usize(k).unwrap();
                    let mut c = Complex::new(T::zero(), T::zero());
                    for (j, fj) in v.iter().enumerate() {
                        let angle = T::PI() * kf * (T::from_usize(j).unwrap() + cst(0.5)) / nf;
                        c = c + *fj * angle.cos();
                    }
                    let norm = if k == 0 { T::one() / nf } else { cst::<T>(2.0) / nf };
                    coeffs.push(c * norm);
                }
            }
        }
        Ok(Self {
            kappa,
            scale,
            breaks,
            coeffs,
        })
    }

    pub fn wavenumber(&self) -> Complex<T> {
        self.kappa
    }

    /// `(H_0(κd), H_1(κd))` for `d > 0`.
    pub fn eval(&self, d: T) -> Result<(Complex<T>, Complex<T>)> {
        let x = self.scale * d;
        let last = *self.breaks.last().unwrap();
        if !(x >= self.breaks[0] && x <= last) {
            return hankel1_01(self.kappa * d);
        }
        let p = self.breaks.partition_point(|&b| b <= x).clamp(1, self.breaks.len() - 1) - 1;
        let (a, b) = (self.breaks[p], self.breaks[p + 1]);
        let t = (x + x - a - b) / (b - a);
        let n = TABLE_DEGREE;
        let c0 = &self.coeffs[2 * n * p..2 * n * p + n];
        let c1 = &self.coeffs[2 * n * p + n..2 * n * (p + 1)];
        let zero = Complex::new(T::zero(), T::zero());
        let (mut b0, mut b0n, mut b1, mut b1n) = (zero, zero, zero, zero);
        let two_t = t + t;
        for k in (1..n).rev() {
            let next0 = b0 * two_t - b0n + c0[k];
            b0n = b0;
            b0 = next0;
            let next1 = b1 * two_t - b1n + c1[k];
            b1n = b1;
            b1 = next1;
        }
        let f0 = b0 * t - b0n + c0[0];
        let f1 = b1 * t - b1n + c1[0];
        let phase = (Complex::new(T::zero(), T::one()) * self.kappa * d).exp();
        Ok((f0 * phase, f1 * phase))
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn hankel_at_one() {
        let (h0, h1) = hankel1_01(C::new(1.0, 0.0)).unwrap();
        assert!(rel(h0, C::new(0.765_197_686_557_966_6, 0.088_256_964_215_676_96)) < 1e-14);
        assert!(rel(h1, C::new(0.440_050_585_744_933_5, -0.781_212_821_300_288_7)) < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            hankel1_01(C::new(0.0, 0.0)),
            Err(Error::SingularArgument)
        ));
        assert!(matches!(
            hankel1_01(C::new(1.0, -0.1)),
            Err(Error::DomainError { .. })
        ));
        assert!(ComplexWavenumber::new(C::new(1.0, -1e-3)).is_err());
        let k = ComplexWavenumber::real(1.0).unwrap();
        assert!(green_kernel(k, 0.0).is_err());
        assert!(hankel1(2, C::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn green_kernel_reference_value() {
        let k = ComplexWavenumber::real(1.0).unwrap();
        let g = green_kernel(k, 1.0).unwrap();
        assert!(rel(g, C::new(-0.022_064_241_053_919_24, 0.191_299_421_639_491_6)) < 1e-13);
    }

    #[test]
    fn decay_in_upper_half_plane() {
        let damped = hankel1(0, C::new(10.0, 5.0)).unwrap();
        let real = hankel1(0, C::new(10.0, 0.0)).unwrap();
        assert!(damped.norm() < real.norm());
        let k = ComplexWavenumber::new(C::new(1.0, 0.5)).unwrap();
        let near = green_kernel(k, 10.0).unwrap().norm();
        let far = green_kernel(k, 40.0).unwrap().norm();
        assert!(far < near * (-0.5f64 * 30.0).exp() * 1.0);
    }

    #[test]
    fn series_j_matches_hankel_real_part() {
        for x in [0.1, 1.0, 3.0, 4.9] {
            let (j0, j1) = bessel_j01(C::new(x, 0.0));
            let (h0, h1) = hankel1_01(C::new(x, 0.0)).unwrap();
            assert!((j0.re - h0.re).abs() < 1e-14);
            assert!((j1.re - h1.re).abs() < 1e-14);
        }
    }

    #[test]
    fn bessel_jy_decreasing_for_large_order() {
        let (j, _) = bessel_jy(60, 10.0f64).unwrap();
        for m in 40..60 {
            assert!(j[m + 1].abs() < j[m].abs());
            assert!(j[m] > 0.0);
        }
    }

    #[test]
    fn bessel_jy_rejects_bad_arguments() {
        assert!(bessel_jy(3, 0.0f64).is_err());
        assert!(bessel_jy(3, -1.0f64).is_err());
        assert!(matches!(
            bessel_jy(400, 0.01f64),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn single_precision_hankel() {
        let (h0, _) = hankel1_01(Complex::<f32>::new(1.0, 0.0)).unwrap();
        assert!((h0.re - 0.765_197_7).abs() < 1e-5);
        assert!((h0.im - 0.088_256_96).abs() < 1e-5);
    }
}
