//! Smooth closed contours, their arclength parameterization and meshes that
//! are uniform in the curvilinear abscissa.
//!
//! Contours are parameterized counterclockwise by `t ∈ [0, 1)`. The unit
//! tangent follows the parameterization and the normal `n = (t_y, -t_x)`
//! points to the exterior.

use crate::quadrature::{gauss_legendre, Rule};
use crate::{Error, Result, Scalar};

/// Smallest mesh accepted by [`UniformMesh::new`].
pub const MIN_NODES: usize = 8;

#[inline]
fn cst<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn sub<T: Scalar>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn norm<T: Scalar>(a: [T; 2]) -> T {
    a[0].hypot(a[1])
}

/// Shape of a closed curve.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind<T> {
    Circle { radius: T },
    Ellipse { semi_x: T, semi_y: T },
    /// Star-shaped curve with radius `r(θ) = r0 + Σ_n (a_n cos nθ + b_n sin nθ)`,
    /// `n = 1, 2, ...`.
    Fourier {
        mean_radius: T,
        cos: Vec<T>,
        sin: Vec<T>,
    },
}

impl<T: Scalar> CurveKind<T> {
    fn validate(&self) -> Result<()> {
        let positive = |x: T, what: &str| {
            if x > T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{what} must be positive, got {x}")))
            }
        };
        match self {
            CurveKind::Circle { radius } => positive(*radius, "circle radius"),
            CurveKind::Ellipse { semi_x, semi_y } => {
                positive(*semi_x, "ellipse semi-axis")?;
                positive(*semi_y, "ellipse semi-axis")
            }
            CurveKind::Fourier { mean_radius, .. } => {
                positive(*mean_radius, "mean radius")?;
                for j in 0..1024 {
                    let theta = T::TAU() * T::from_usize(j).unwrap() / cst(1024.0);
                    let (r, _, _) = self.fourier_radius(theta);
                    if !(r > T::zero()) {
                        return Err(Error::InvalidInput(format!(
                            "Fourier radius is not positive at θ = {theta}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// `r(θ)`, `r'(θ)`, `r''(θ)` for the Fourier description.
    fn fourier_radius(&self, theta: T) -> (T, T, T) {
        let CurveKind::Fourier {
            mean_radius,
            cos,
            sin,
        } = self
        else {
            unreachable!()
        };
        let mut r = *mean_radius;
        let mut dr = T::zero();
        let mut ddr = T::zero();
        let len = cos.len().max(sin.len());
        for j in 0..len {
            let n = T::from_usize(j + 1).unwrap();
            let a = cos.get(j).copied().unwrap_or_else(T::zero);
            let b = sin.get(j).copied().unwrap_or_else(T::zero);
            let (s, c) = (n * theta).sin_cos();
            r = r + a * c + b * s;
            dr = dr + n * (b * c - a * s);
            ddr = ddr - n * n * (a * c + b * s);
        }
        (r, dr, ddr)
    }

    /// Position and first two derivatives with respect to `t`.
    pub fn evaluate(&self, t: T) -> ([T; 2], [T; 2], [T; 2]) {
        let tau = T::TAU();
        let theta = tau * t;
        let (s, c) = theta.sin_cos();
        let tau2 = tau * tau;
        match self {
            CurveKind::Circle { radius } => {
                let r = *radius;
                (
                    [r * c, r * s],
                    [-tau * r * s, tau * r * c],
                    [-tau2 * r * c, -tau2 * r * s],
                )
            }
            CurveKind::Ellipse { semi_x, semi_y } => (
                [*semi_x * c, *semi_y * s],
                [-tau * *semi_x * s, tau * *semi_y * c],
                [-tau2 * *semi_x * c, -tau2 * *semi_y * s],
            ),
            CurveKind::Fourier { .. } => {
                let (r, dr, ddr) = self.fourier_radius(theta);
                let two = cst::<T>(2.0);
                (
                    [r * c, r * s],
                    [tau * (dr * c - r * s), tau * (dr * s + r * c)],
                    [
                        tau2 * (ddr * c - two * dr * s - r * c),
                        tau2 * (ddr * s + two * dr * c - r * s),
                    ],
                )
            }
        }
    }
}

/// Position, unit tangent and exterior unit normal at a point of a contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub param: T,
    pub position: [T; 2],
    pub tangent: [T; 2],
    pub normal: [T; 2],
    pub speed: T,
}

/// Closed contour with a numerically inverted arclength map.
///
/// The cumulative arclength is tabulated on equal parameter panels with a
/// 16-point Gauss–Legendre rule per panel. The panel count is doubled until
/// the perimeter is stable to the requested relative tolerance; inversion
/// `s -> t` uses safeguarded Newton iterations inside the bracketing panel.
#[derive(Debug, Clone)]
pub struct Contour<T> {
    kind: CurveKind<T>,
    perimeter: T,
    cumulative: Vec<T>,
    rule: Rule<T>,
    tolerance: T,
}

impl<T: Scalar> Contour<T> {
    pub fn new(kind: CurveKind<T>) -> Result<Self> {
        Self::with_tolerance(kind, cst(1e-13))
    }

    pub fn circle(radius: T) -> Result<Self> {
        Self::new(CurveKind::Circle { radius })
    }

    pub fn ellipse(semi_x: T, semi_y: T) -> Result<Self> {
        Self::new(CurveKind::Ellipse { semi_x, semi_y })
    }

    /// Builds the arclength parameterization to relative accuracy `tol`.
    pub fn with_tolerance(kind: CurveKind<T>, tol: T) -> Result<Self> {
        kind.validate()?;
        if !(tol > T::zero()) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        let rule = gauss_legendre::<T>(16);

        let mut max_speed = T::zero();
        let mut min_speed = T::infinity();
        let mut min_at = T::zero();
        let probes = 4096;
        for j in 0..probes {
            let t = T::from_usize(j).unwrap() / T::from_usize(probes).unwrap();
            let (_, d, _) = kind.evaluate(t);
            let sp = norm(d);
            if sp < min_speed {
                min_speed = sp;
                min_at = t;
            }
            max_speed = max_speed.max(sp);
        }
        if !(min_speed > cst::<T>(1e-10) * max_speed) {
            return Err(Error::DegenerateCurve {
                t: min_at.to_f64().unwrap(),
            });
        }

        let mut panels = 64usize;
        let mut cumulative = Self::tabulate(&kind, &rule, panels);
        loop {
            let refined = Self::tabulate(&kind, &rule, 2 * panels);
            let (a, b) = (cumulative[panels], refined[2 * panels]);
            cumulative = refined;
            panels *= 2;
            if (a - b).abs() <= tol * b || panels >= 1 << 16 {
                break;
            }
        }
        let perimeter = cumulative[panels];
        Ok(Self {
            kind,
            perimeter,
            cumulative,
            rule,
            tolerance: tol,
        })
    }

    fn tabulate(kind: &CurveKind<T>, rule: &Rule<T>, panels: usize) -> Vec<T> {
        let width = T::one() / T::from_usize(panels).unwrap();
        let mut cumulative = Vec::with_capacity(panels + 1);
        // Neumaier-compensated running sum
        let mut acc = T::zero();
        let mut comp = T::zero();
        cumulative.push(acc);
        for p in 0..panels {
            let a = T::from_usize(p).unwrap() * width;
            let x = rule.integrate(a, a + width, |t| norm(kind.evaluate(t).1));
            let sum = acc + x;
            comp = comp + if acc.abs() >= x.abs() { (acc - sum) + x } else { (x - sum) + acc };
            acc = sum;
            cumulative.push(acc + comp);
        }
        cumulative
    }

    pub fn kind(&self) -> &CurveKind<T> {
        &self.kind
    }

    pub fn perimeter(&self) -> T {
        self.perimeter
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    fn panels(&self) -> usize {
        self.cumulative.len() - 1
    }

    /// Arclength from `t = 0` to `t` (any real `t`; whole turns add `L`).
    pub fn arclength_at(&self, t: T) -> T {
        let turns = t.floor();
        let frac = t - turns;
        let panels = self.panels();
        let width = T::one() / T::from_usize(panels).unwrap();
        let j = (frac / width).to_usize().unwrap().min(panels - 1);
        let t0 = T::from_usize(j).unwrap() * width;
        turns * self.perimeter + self.cumulative[j] + self.partial_arclength(t0, frac)
    }

    fn partial_arclength(&self, from: T, to: T) -> T {
        if to == from {
            return T::zero();
        }
        self.rule.integrate(from, to, |t| self.speed(t))
    }

    /// Parameter `t` at arclength `s`. Arclengths outside `[0, L)` map to
    /// parameters outside `[0, 1)` by whole turns.
    pub fn param_at(&self, s: T) -> T {
        let l = self.perimeter;
        let turns = (s / l).floor();
        let s_frac = s - turns * l;
        if let CurveKind::Circle { .. } = self.kind {
            return s / l;
        }
        let panels = self.panels();
        // bracketing panel by binary search on the cumulative table
        let j = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s_frac).unwrap())
        {
            Ok(i) => i.min(panels - 1),
            Err(i) => i.saturating_sub(1).min(panels - 1),
        };
        let width = T::one() / T::from_usize(panels).unwrap();
        let lo0 = T::from_usize(j).unwrap() * width;
        let hi0 = lo0 + width;
        let (s_lo, s_hi) = (self.cumulative[j], self.cumulative[j + 1]);
        let (mut lo, mut hi) = (lo0, hi0);
        let mut t = lo0 + width * (s_frac - s_lo) / (s_hi - s_lo);
        let target = s_frac - s_lo;
        let tol = cst::<T>(1e-15) * l;
        for _ in 0..50 {
            let f = self.partial_arclength(lo0, t) - target;
            if f.abs() <= tol {
                break;
            }
            if f > T::zero() {
                hi = t;
            } else {
                lo = t;
            }
            let next = t - f / self.speed(t);
            t = if next > lo && next < hi {
                next
            } else {
                cst::<T>(0.5) * (lo + hi)
            };
        }
        turns + t
    }

    pub fn speed(&self, t: T) -> T {
        norm(self.kind.evaluate(t).1)
    }

    pub fn point_at_param(&self, t: T) -> CurvePoint<T> {
        let (p, d, _) = self.kind.evaluate(t);
        let speed = norm(d);
        let tangent = [d[0] / speed, d[1] / speed];
        CurvePoint {
            param: t,
            position: p,
            tangent,
            normal: [tangent[1], -tangent[0]],
            speed,
        }
    }

    pub fn point_at_arclength(&self, s: T) -> CurvePoint<T> {
        self.point_at_param(self.param_at(s))
    }

    /// Signed curvature, positive for a convex counterclockwise curve.
    pub fn curvature_at_param(&self, t: T) -> T {
        let (_, d, dd) = self.kind.evaluate(t);
        let speed = norm(d);
        (d[0] * dd[1] - d[1] * dd[0]) / (speed * speed * speed)
    }

    /// Equivalent-circle radius `L / 2π` and the averaged radius of
    /// curvature `a` used in the complex wavenumber shift.
    pub fn curvature_stats(&self, averaging: RadiusAveraging) -> CurvatureStats<T> {
        let equivalent_radius = self.perimeter / T::TAU();
        let average_radius = match averaging {
            RadiusAveraging::EquivalentCircle => equivalent_radius,
            RadiusAveraging::MeanRadiusOfCurvature => {
                let panels = self.panels();
                let width = T::one() / T::from_usize(panels).unwrap();
                let mut acc = T::zero();
                for p in 0..panels {
                    let a = T::from_usize(p).unwrap() * width;
                    acc = acc
                        + self.rule.integrate(a, a + width, |t| {
                            self.speed(t) / self.curvature_at_param(t)
                        });
                }
                acc / self.perimeter
            }
        };
        CurvatureStats {
            equivalent_radius,
            average_radius,
        }
    }
}

/// How the "average radius of curvature" entering `k~` is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadiusAveraging {
    /// `a = L / 2π`, identical for the contour and its equal-perimeter circle.
    #[default]
    EquivalentCircle,
    /// Arclength mean of `1 / κ`.
    MeanRadiusOfCurvature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureStats<T> {
    pub equivalent_radius: T,
    pub average_radius: T,
}

/// Nodes equispaced in arclength, `s_i = i L / N`, carrying piecewise-linear
/// hat functions. Element `e` spans nodes `e` and `e + 1 (mod N)`.
#[derive(Debug, Clone)]
pub struct UniformMesh<T> {
    spacing: T,
    perimeter: T,
    arclengths: Vec<T>,
    points: Vec<CurvePoint<T>>,
}

impl<T: Scalar> UniformMesh<T> {
    pub fn new(contour: &Contour<T>, n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::MeshTooSmall { n, min: MIN_NODES });
        }
        let perimeter = contour.perimeter();
        let spacing = perimeter / T::from_usize(n).unwrap();
        let arclengths: Vec<T> = (0..n).map(|i| T::from_usize(i).unwrap() * spacing).collect();
        let points = arclengths
            .iter()
            .map(|&s| contour.point_at_arclength(s))
            .collect();
        Ok(Self {
            spacing,
            perimeter,
            arclengths,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Element length `h = L / N`.
    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn perimeter(&self) -> T {
        self.perimeter
    }

    pub fn arclengths(&self) -> &[T] {
        &self.arclengths
    }

    pub fn points(&self) -> &[CurvePoint<T>] {
        &self.points
    }

    pub fn positions(&self) -> impl Iterator<Item = [T; 2]> + '_ {
        self.points.iter().map(|p| p.position)
    }

    /// Arclength where element `e` starts.
    pub fn element_start(&self, e: usize) -> T {
        self.arclengths[e % self.len()]
    }

    /// Node indices `(e, e + 1 mod N)` of element `e`.
    pub fn element_nodes(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_circle_perimeter_is_two_pi() {
        let c = Contour::circle(1.0f64).unwrap();
        assert!((c.perimeter() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c = Contour::circle(3.0).unwrap();
        for j in 0..10 {
            let t = j as f64 / 10.0;
            assert!((c.curvature_at_param(t) - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn curvature_stats_identity_cases() {
        let unit = Contour::circle(1.0f64).unwrap();
        let stats = unit.curvature_stats(RadiusAveraging::EquivalentCircle);
        assert!((stats.equivalent_radius - 1.0).abs() < 1e-14);
        assert!((stats.average_radius - 1.0).abs() < 1e-14);
        let five = Contour::circle(5.0f64).unwrap();
        let stats = five.curvature_stats(RadiusAveraging::MeanRadiusOfCurvature);
        assert!((stats.average_radius - 5.0).abs() < 1e-12);
        let ellipse = Contour::ellipse(2.0f64, 1.0).unwrap();
        let stats = ellipse.curvature_stats(RadiusAveraging::EquivalentCircle);
        assert!((stats.equivalent_radius - 1.541_964_425_190_04).abs() < 1e-13);
    }

    #[test]
    fn mean_radius_of_curvature_for_ellipse() {
        // (1/L) ∫ ds/κ = (1/L) ∫ |p'|^4 / (a b) dθ for the ellipse
        let e = Contour::ellipse(2.0, 1.0).unwrap();
        let got = e.curvature_stats(RadiusAveraging::MeanRadiusOfCurvature).average_radius;
        let rule = gauss_legendre::<f64>(16);
        let mut acc = 0.0;
        for p in 0..256 {
            let a = p as f64 * 2.0 * PI / 256.0;
            acc += rule.integrate(a, a + 2.0 * PI / 256.0, |th: f64| {
                let sp2 = 4.0 * th.sin().powi(2) + th.cos().powi(2);
                sp2 * sp2 / 2.0
            });
        }
        assert!((got - acc / e.perimeter()).abs() < 1e-11);
    }

    #[test]
    fn degenerate_and_invalid_curves_are_rejected() {
        assert!(Contour::circle(0.0).is_err());
        assert!(Contour::ellipse(1.0, -2.0).is_err());
        // r(θ) = 1 - cos θ touches zero: not star-shaped around the origin
        let cardioid = CurveKind::Fourier {
            mean_radius: 1.0,
            cos: vec![-1.0],
            sin: vec![],
        };
        assert!(Contour::new(cardioid).is_err());
    }

    #[test]
    fn mesh_needs_eight_nodes() {
        let c = Contour::circle(1.0f64).unwrap();
        assert!(matches!(
            UniformMesh::new(&c, 4),
            Err(Error::MeshTooSmall { n: 4, min: 8 })
        ));
    }

    #[test]
    fn circle_mesh_nodes_at_symmetric_angles() {
        let c = Contour::circle(1.0f64).unwrap();
        let mesh = UniformMesh::new(&c, 8).unwrap();
        for (i, p) in mesh.points().iter().enumerate() {
            let angle = PI / 4.0 * i as f64;
            assert!((p.position[0] - angle.cos()).abs() < 1e-15);
            assert!((p.position[1] - angle.sin()).abs() < 1e-15);
        }
        // quarter points sit at 0°, 90°, 180°, 270°
        assert!((mesh.points()[2].position[1] - 1.0).abs() < 1e-15);
        assert!((mesh.points()[4].position[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn fourier_curve_round_trip() {
        let kind = CurveKind::Fourier {
            mean_radius: 1.0,
            cos: vec![0.0, 0.1],
            sin: vec![0.05],
        };
        let c = Contour::new(kind).unwrap();
        for j in 0..50 {
            let s = c.perimeter() * j as f64 / 50.0;
            let t = c.param_at(s);
            assert!((c.arclength_at(t) - s).abs() < 1e-12 * c.perimeter());
        }
    }
}
