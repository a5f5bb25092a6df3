//! One-dimensional quadrature rules on the unit interval.
//!
//! Two families are provided: Gauss–Legendre rules for smooth integrands and
//! Gauss rules for the logarithmic weight `-ln(x)` on `(0, 1]`, which the
//! boundary element assembly uses for the weakly singular part of the
//! Helmholtz kernels.

use crate::Scalar;

/// Nodes and weights of a quadrature rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> Rule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Applies the rule to `f` on `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let len = b - a;
        self.iter()
            .fold(T::zero(), |acc, (x, w)| acc + w * f(a + len * x))
            * len
    }
}

/// Gauss–Legendre rule with `n` points on `[0, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre polynomial `P_n`,
/// so the rule is accurate to working precision for any `n`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> Rule<T> {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let half = T::from(0.5).unwrap();
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from(n).unwrap();
    let pi = T::PI();
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root
        let mut x = (pi * (T::from(i).unwrap() + T::from(0.75).unwrap())
            / (nf + half))
            .cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::from(4.0).unwrap() {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = T::from(2.0).unwrap() / ((T::one() - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]; roots come out in decreasing order
        nodes[n - 1 - i] = half * (T::one() + x);
        nodes[i] = half * (T::one() - x);
        weights[n - 1 - i] = half * w;
        weights[i] = half * w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from(k).unwrap();
        let p2 = ((T::from(2 * k - 1).unwrap()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from(n).unwrap();
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Gauss rule for `∫_0^1 -ln(x) f(x) dx` with `n` points.
///
/// The recurrence coefficients of the orthogonal polynomials for the weight
/// `-ln x` are obtained from the modified Chebyshev algorithm using the
/// closed-form moments of the shifted Legendre polynomials,
/// `∫ -ln(x) P*_j(x) dx = (-1)^j / (j (j + 1))`, and the rule follows from
/// the eigen-decomposition of the Jacobi matrix (Golub–Welsch).
pub fn gauss_log<T: Scalar>(n: usize) -> Rule<T> {
    assert!(n > 0, "log-weighted rule needs at least one point");
    let (alpha, beta) = log_weight_recurrence::<T>(n);
    golub_welsch(&alpha, &beta)
}

fn log_weight_recurrence<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let two_n = 2 * n;
    // monic shifted Legendre: p_{j+1} = (x - 1/2) p_j - b_j p_{j-1}
    let a: Vec<T> = vec![T::from(0.5).unwrap(); two_n];
    let b: Vec<T> = (0..two_n)
        .map(|j| {
            if j == 0 {
                T::one()
            } else {
                let jf = T::from(j).unwrap();
                jf * jf / (T::from(4.0).unwrap() * (T::from(4.0).unwrap() * jf * jf - T::one()))
            }
        })
        .collect();
    // modified moments with respect to the monic polynomials
    let mut moments = vec![T::zero(); two_n];
    let mut binom = T::one(); // C(2j, j)
    for (j, m) in moments.iter_mut().enumerate() {
        if j > 0 {
            let jf = T::from(j).unwrap();
            binom = binom * (T::from(2.0).unwrap() * jf) * (T::from(2.0).unwrap() * jf - T::one())
                / (jf * jf);
        }
        let raw = if j == 0 {
            T::one()
        } else {
            let jf = T::from(j).unwrap();
            let sign = if j % 2 == 0 { T::one() } else { -T::one() };
            sign / (jf * (jf + T::one()))
        };
        *m = raw / binom;
    }

    let mut alpha = vec![T::zero(); n];
    let mut beta = vec![T::zero(); n];
    let mut sigma_prev = vec![T::zero(); two_n];
    let mut sigma: Vec<T> = moments.clone();
    alpha[0] = a[0] + moments[1] / moments[0];
    beta[0] = moments[0];
    for k in 1..n {
        let mut next = vec![T::zero(); two_n];
        for l in k..(two_n - k) {
            next[l] = sigma[l + 1] - (alpha[k - 1] - a[l]) * sigma[l] - beta[k - 1] * sigma_prev[l]
                + b[l] * sigma[l - 1];
        }
        alpha[k] = a[k] + next[k + 1] / next[k] - sigma[k] / sigma[k - 1];
        beta[k] = next[k] / sigma[k - 1];
        sigma_prev = sigma;
        sigma = next;
    }
    (alpha, beta)
}

/// Nodes and weights from the Jacobi matrix with diagonal `alpha` and
/// squared off-diagonal `beta[1..]`; `beta[0]` is the total mass.
fn golub_welsch<T: Scalar>(alpha: &[T], beta: &[T]) -> Rule<T> {
    let n = alpha.len();
    let mut d = alpha.to_vec();
    let mut e: Vec<T> = (0..n)
        .map(|i| if i + 1 < n { beta[i + 1].sqrt() } else { T::zero() })
        .collect();
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    symmetric_tridiagonal_ql(&mut d, &mut e, &mut z);
    let mut pairs: Vec<(T, T)> = d
        .into_iter()
        .zip(z)
        .map(|(x, v)| (x, beta[0] * v * v))
        .collect();
    pairs.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Implicit QL iteration on a symmetric tridiagonal matrix. On exit `d`
/// holds the eigenvalues and `z` the first components of the normalized
/// eigenvectors.
fn symmetric_tridiagonal_ql<T: Scalar>(d: &mut [T], e: &mut [T], z: &mut [T]) {
    let n = d.len();
    let two = T::from(2.0).unwrap();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}
