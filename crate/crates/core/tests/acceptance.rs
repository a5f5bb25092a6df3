//! Acceptance suite. Every criterion writes one `criterion N: PASS|FAIL`
//! line to stdout (bypassing the test harness capture) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::Instant;

use faer::prelude::*;
use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfie_fds::bem::{gram_matrix, Assembler, QuadratureConfig};
use cfie_fds::circulant::{circle_operator, CircleOperators};
use cfie_fds::compression::{skeletonize, SkeletonConfig};
use cfie_fds::physics::{
    fourier_ordered_spectrum, numerical_rank, singular_values, spectrum_tail, CircleSeries,
    PlaneWave, SurfaceCurrentSolution, SurfaceQuadrature,
};
use cfie_fds::solver::{DirectSolver, FastDirectSolver};
use cfie_fds::specfun::{bessel_jy, hankel_bessel_01};
use cfie_fds::system::{PreconditionedSystem, SystemConfig};
use cfie_fds::{c64, Circulant, Contour, UniformMesh, Wavenumber};

const PAPER_EPS: f64 = 0.015;
const SWEEP_K: [f64; 4] = [10.0, 20.0, 40.0, 80.0];
/// Incidence angles (degrees) used for solve-error statistics.
const ERROR_ANGLES: usize = 36;

/// Criteria run one at a time so timings are not shared with other tests.
fn exclusive() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(criterion: u32, pass: bool, details: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {criterion}: {verdict} | {details}").unwrap();
    out.flush().unwrap();
}

fn nodes_for(contour: &Contour, k: f64, ppw: f64) -> usize {
    (ppw * contour.perimeter() * k / (2.0 * PI)).round() as usize
}

fn ellipse() -> Contour {
    Contour::ellipse(2.0, 1.0).unwrap()
}

fn rel_l2(a: &Mat<c64>, b: &Mat<c64>) -> f64 {
    (a - b).norm_l2() / b.norm_l2()
}

fn excitation(
    contour: &Contour,
    mesh: &UniformMesh,
    sys: &PreconditionedSystem,
    degrees: &[f64],
) -> Mat<c64> {
    let asm = Assembler::new(contour, mesh, QuadratureConfig::default()).unwrap();
    let quad = SurfaceQuadrature::new(&asm);
    let waves: Vec<PlaneWave> = degrees.iter().map(|d| PlaneWave::new(d.to_radians())).collect();
    let (e, h) = quad.project_excitation(sys.k, sys.impedance, &waves);
    sys.rhs_many(e.as_ref(), h.as_ref()).unwrap()
}

/// One ellipse case at ε = 0.015 with its dense oracle.
struct Case {
    k: f64,
    n: usize,
    fast: FastDirectSolver,
    setup_seconds: f64,
    rhs: Mat<c64>,
    dense_solution: Mat<c64>,
}

impl Case {
    fn build(k: f64, ppw: f64) -> Self {
        let contour = ellipse();
        let n = nodes_for(&contour, k, ppw);
        let mesh = UniformMesh::new(&contour, n).unwrap();
        let clock = Instant::now();
        let fast = FastDirectSolver::setup(
            &contour,
            &mesh,
            k,
            &SystemConfig::default(),
            &SkeletonConfig {
                eps: PAPER_EPS,
                ..SkeletonConfig::default()
            },
            true,
        )
        .unwrap();
        let setup_seconds = clock.elapsed().as_secs_f64();
        let degrees: Vec<f64> = (0..ERROR_ANGLES).map(|i| i as f64 * 360.0 / ERROR_ANGLES as f64).collect();
        let rhs = excitation(&contour, &mesh, &fast.system, &degrees);
        let dense_solution: Mat<c64> = fast.system.dense().unwrap().partial_piv_lu().solve(&rhs);
        Self {
            k,
            n,
            fast,
            setup_seconds,
            rhs,
            dense_solution,
        }
    }

    fn dense(&self) -> &Mat<c64> {
        self.fast.system.dense().unwrap()
    }

    /// RMS over incidence angles of the relative error against dense LU.
    fn solve_error(&self) -> f64 {
        let x = self.fast.solver.solve_many(self.rhs.as_ref()).unwrap();
        let m = x.ncols();
        let sum: f64 = (0..m)
            .map(|j| {
                let e = (x.col(j) - self.dense_solution.col(j)).norm_l2() / self.dense_solution.col(j).norm_l2();
                e * e
            })
            .sum();
        (sum / m as f64).sqrt()
    }
}

fn sweep() -> &'static Vec<Case> {
    static SWEEP: OnceLock<Vec<Case>> = OnceLock::new();
    SWEEP.get_or_init(|| SWEEP_K.iter().map(|&k| Case::build(k, 10.0)).collect())
}

/// k = 40 at 20 points per wavelength (twice the nodes of the sweep case).
fn refined_k40() -> &'static Case {
    static CASE: OnceLock<Case> = OnceLock::new();
    CASE.get_or_init(|| Case::build(40.0, 20.0))
}

#[test]
fn criterion_1_woodbury_matches_dense_lu() {
    let _guard = exclusive();
    let contour = ellipse();
    let k = 20.0;
    let n = nodes_for(&contour, k, 10.0);
    let mesh = UniformMesh::new(&contour, n).unwrap();
    let clock = Instant::now();
    let fast = FastDirectSolver::setup(
        &contour,
        &mesh,
        k,
        &SystemConfig::default(),
        &SkeletonConfig {
            eps: 1e-10,
            ..SkeletonConfig::default()
        },
        true,
    )
    .unwrap();
    let b = excitation(&contour, &mesh, &fast.system, &[0.0, 45.0, 90.0]);
    let x = fast.solver.solve_many(b.as_ref()).unwrap();
    let seconds = clock.elapsed().as_secs_f64();
    let xd: Mat<c64> = fast.system.dense().unwrap().partial_piv_lu().solve(&b);
    let err = rel_l2(&x, &xd);
    let pass = err <= 1e-8 && seconds <= 60.0;
    report(
        1,
        pass,
        &format!("N={n} rank={} rel_err={err:.2e} (<=1e-8) time={seconds:.1}s (<=60s)", fast.rank()),
    );
    assert!(pass);
}

#[test]
fn criterion_2_circle_symbols_match_dense_assembly() {
    let _guard = exclusive();
    let n = 200;
    let k = 20.0;
    let contour = Contour::circle(1.0).unwrap();
    let mesh = UniformMesh::new(&contour, n).unwrap();
    let mut sys = PreconditionedSystem::assemble(&contour, &mesh, k, &SystemConfig::default()).unwrap();
    let ops = CircleOperators::assemble(
        1.0,
        n,
        Wavenumber::real(k).unwrap(),
        sys.k_tilde,
        QuadratureConfig::default(),
    )
    .unwrap();
    let symbol_gap = |dense: &Mat<c64>, circ: &Circulant| {
        let col: Vec<c64> = (0..n).map(|i| dense[(i, 0)]).collect();
        let from_dense = Circulant::from_first_column(&col).unwrap();
        let scale = circ.symbol().iter().map(|v| v.norm()).fold(0.0, f64::max);
        from_dense
            .symbol()
            .iter()
            .zip(circ.symbol())
            .map(|(a, b)| (a - b).norm() / scale)
            .fold(0.0, f64::max)
    };
    let operator_gap = [
        symbol_gap(&sys.single_layer_tilde.entries, &ops.single_layer_tilde),
        symbol_gap(&sys.double_layer_tilde.entries, &ops.double_layer_tilde),
        symbol_gap(&sys.double_layer.entries, &ops.double_layer),
        symbol_gap(&sys.hypersingular.entries, &ops.hypersingular),
        symbol_gap(&sys.gram.entries, &ops.gram),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let cc = ops.compose().unwrap();
    let composed_gap = symbol_gap(sys.form_dense().unwrap(), &cc);
    let pass = operator_gap <= 1e-11 && composed_gap <= 1e-11;
    report(
        2,
        pass,
        &format!("operator symbols max_rel_gap={operator_gap:.2e}, composed C_c gap={composed_gap:.2e} (<=1e-11)"),
    );
    assert!(pass);
}

fn circle_current_errors(k: f64, n: usize) -> (f64, f64) {
    let contour = Contour::circle(1.0).unwrap();
    let mesh = UniformMesh::new(&contour, n).unwrap();
    let mut sys = PreconditionedSystem::assemble(&contour, &mesh, k, &SystemConfig::default()).unwrap();
    let incidence = 0.0;
    let b = excitation(&contour, &mesh, &sys, &[incidence]);
    let x: Mat<c64> = sys.form_dense().unwrap().partial_piv_lu().solve(&b);
    let sol = SurfaceCurrentSolution {
        arclengths: mesh.arclengths().to_vec(),
        coefficients: (0..n).map(|i| x[(i, 0)]).collect(),
    };
    let series = CircleSeries::new(1.0, k).unwrap();
    let reference = |s: f64| series.surface_current(incidence, s);
    (
        sol.relative_l2_error(2.0 * PI, reference, 16),
        sol.relative_nodal_error(reference),
    )
}

#[test]
fn criterion_3_circle_current_matches_series() {
    let _guard = exclusive();
    let contour = Contour::circle(1.0).unwrap();
    let k = 20.0;
    let (coarse, coarse_nodal) = circle_current_errors(k, nodes_for(&contour, k, 10.0));
    let (fine, fine_nodal) = circle_current_errors(k, nodes_for(&contour, k, 20.0));
    let factor = coarse / fine;
    let pass = coarse <= 0.02 && factor >= 1.5;
    report(
        3,
        pass,
        &format!(
            "L2(Γ) err ppw10={coarse:.4} (<=0.02) ppw20={fine:.4} gain={factor:.2} (>=1.5); nodal err {coarse_nodal:.4} -> {fine_nodal:.4}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_rank_growth_exponent() {
    let _guard = exclusive();
    let cases = sweep();
    let ranks: Vec<usize> = cases.iter().map(|c| c.fast.rank()).collect();
    let seconds: f64 = cases.iter().map(|c| c.setup_seconds).sum();
    // least squares for log r = log c + α log k
    let xs: Vec<f64> = cases.iter().map(|c| c.k.ln()).collect();
    let ys: Vec<f64> = ranks.iter().map(|&r| (r as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let alpha = sxy / sxx;
    let pass = alpha <= 0.45 && seconds <= 900.0;
    let ns: Vec<usize> = cases.iter().map(|c| c.n).collect();
    report(
        4,
        pass,
        &format!("k={SWEEP_K:?} N={ns:?} ranks={ranks:?} alpha={alpha:.3} (<=0.45) time={seconds:.0}s (<=900s)"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_extraction_is_necessary() {
    let _guard = exclusive();
    let coarse = &sweep()[2];
    let fine = refined_k40();
    let parts = |case: &Case| {
        let c = case.dense();
        let n = case.n;
        let cc = case.fast.extraction.to_dense();
        let diff = Mat::from_fn(n, n, |i, j| c[(i, j)] - cc[i][j]);
        let g = &case.fast.system.gram.entries;
        let dev = Mat::from_fn(n, n, |i, j| c[(i, j)] - g[(i, j)] * 0.5);
        (diff, dev)
    };
    let (diff, dev) = parts(coarse);
    let rank_diff = numerical_rank(&singular_values(diff.as_ref()).unwrap(), PAPER_EPS);
    let rank_dev = numerical_rank(&singular_values(dev.as_ref()).unwrap(), PAPER_EPS);
    let tails = |case: &Case| {
        let (diff, dev) = parts(case);
        let n = case.n;
        let t = |m: &Mat<c64>| spectrum_tail(&fourier_ordered_spectrum(m.as_ref()).unwrap(), n, 0.1).ratio();
        (t(&diff), t(&dev), t(case.dense()))
    };
    let (d1, v1, c1) = tails(coarse);
    let (d2, v2, c2) = tails(fine);
    let (rd, rv, rc) = (d2 / d1, v2 / v1, c2 / c1);
    let pass = rank_diff < rank_dev && rd <= 0.7 && rv >= 0.9 && rc >= 0.9;
    report(
        5,
        pass,
        &format!(
            "k=40 rank(C-Cc)={rank_diff} < rank(C-G/2)={rank_dev}; tail(2N)/tail(N): C-Cc={rd:.3} (<=0.7), C-G/2={rv:.3} (>=0.9), C={rc:.3} (>=0.9)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_spectrum_peaks_at_ka() {
    let _guard = exclusive();
    let contour = Contour::circle(1.0).unwrap();
    let k = 30.0;
    let n = nodes_for(&contour, k, 10.0);
    let mesh = UniformMesh::new(&contour, n).unwrap();
    let mut sys = PreconditionedSystem::assemble(&contour, &mesh, k, &SystemConfig::default()).unwrap();
    let spectrum = fourier_ordered_spectrum(sys.form_dense().unwrap().as_ref()).unwrap();
    let top = spectrum
        .iter()
        .max_by(|a, b| a.sigma.total_cmp(&b.sigma))
        .unwrap();
    let ka = k;
    let pass = (top.mode as f64) >= 0.8 * ka && (top.mode as f64) <= 1.2 * ka;
    report(
        6,
        pass,
        &format!("unit circle k=30 N={n}: max sigma={:.4e} at mode {} (window [{:.0}, {:.0}])", top.sigma, top.mode, 0.8 * ka, 1.2 * ka),
    );
    assert!(pass);
}

#[test]
fn criterion_7_accuracy_does_not_degrade_with_frequency() {
    let _guard = exclusive();
    let errors: Vec<f64> = sweep().iter().map(Case::solve_error).collect();
    let mut rises = 0;
    let mut within = true;
    for w in errors.windows(2) {
        if w[1] > w[0] {
            rises += 1;
            within &= w[1] <= 1.1 * w[0];
        }
    }
    let pass = errors[3] <= errors[0] && rises <= 1 && within;
    report(
        7,
        pass,
        &format!("eps=0.015 rms rel err over {ERROR_ANGLES} angles at k={SWEEP_K:?}: {:?}; rises={rises}, err(80)<=err(10) required", errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()),
    );
    assert!(pass);
}

/// Seconds per right-hand side of a 360-angle sweep after factorization.
fn per_rhs_seconds(case: &Case) -> f64 {
    let contour = ellipse();
    let mesh = UniformMesh::new(&contour, case.n).unwrap();
    let degrees: Vec<f64> = (0..360).map(|d| d as f64).collect();
    let b = excitation(&contour, &mesh, &case.fast.system, &degrees);
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let clock = Instant::now();
        let x = case.fast.solver.solve_many(b.as_ref()).unwrap();
        best = best.min(clock.elapsed().as_secs_f64());
        std::hint::black_box(&x);
    }
    best / 360.0
}

#[test]
fn criterion_8_multi_rhs_throughput() {
    let _guard = exclusive();
    let coarse = &sweep()[2];
    let fine = refined_k40();
    let lu = coarse.dense().partial_piv_lu();
    let b = Mat::from_fn(coarse.n, 1, |i, _| coarse.rhs[(i, 0)]);
    let mut baseline = f64::INFINITY;
    for _ in 0..20 {
        let clock = Instant::now();
        let x: Mat<c64> = lu.solve(&b);
        baseline = baseline.min(clock.elapsed().as_secs_f64());
        std::hint::black_box(&x);
    }
    let t1 = per_rhs_seconds(coarse);
    let t2 = per_rhs_seconds(fine);
    let fraction = t1 / baseline;
    let scaling = t2 / t1;
    let pass = fraction <= 0.05 && scaling <= 2.6;
    report(
        8,
        pass,
        &format!(
            "k=40 N={}: per-RHS {t1:.2e}s = {:.1}% of dense LU back-substitution {baseline:.2e}s (<=5%); N={} per-RHS {t2:.2e}s, ratio {scaling:.2} (<=2.6)",
            coarse.n,
            100.0 * fraction,
            fine.n
        ),
    );
    assert!(pass);
}

fn woodbury_random_error(rng: &mut ChaCha8Rng, n: usize, r: usize) -> f64 {
    let symbol: Vec<c64> = (0..n)
        .map(|_| c64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    let c = Circulant::from_symbol(symbol).unwrap();
    let u = Mat::from_fn(n, r, |_, _| c64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)));
    let v = Mat::from_fn(n, r, |_, _| c64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)));
    let low = &u * v.transpose();
    let skeleton = skeletonize(
        &low,
        &SkeletonConfig {
            eps: 1e-14,
            ..SkeletonConfig::default()
        },
    )
    .unwrap();
    let rows = c.to_dense();
    let full = Mat::from_fn(n, n, |i, j| rows[i][j] + low[(i, j)]);
    let solver = DirectSolver::factorize(c, &skeleton).unwrap();
    let b = Mat::from_fn(n, 2, |_, _| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let x = solver.solve_many(b.as_ref()).unwrap();
    let xd: Mat<c64> = full.partial_piv_lu().solve(&b);
    rel_l2(&x, &xd)
}

#[test]
fn criterion_9_invariant_suites() {
    let _guard = exclusive();
    // Wronskians, real and complex arguments
    let mut wronskian = 0.0f64;
    let mut x = 0.1f64;
    while x <= 200.0 {
        let (j, y) = bessel_jy(41, x).unwrap();
        for m in 0..=40 {
            let jp = j[m] * m as f64 / x - j[m + 1];
            let yp = y[m] * m as f64 / x - y[m + 1];
            let target = 2.0 / (PI * x);
            wronskian = wronskian.max(((j[m] * yp - jp * y[m]) - target).abs() / target);
        }
        x *= 1.37;
    }
    for (re, im) in [(0.3, 0.0), (3.0, 1.0), (7.5, 0.4), (12.0, 2.5), (25.0, 1.2), (60.0, 0.0)] {
        let z = c64::new(re, im);
        let ([h0, h1], [j0, j1]) = hankel_bessel_01(z).unwrap();
        let target = c64::new(0.0, 2.0 / PI) / z;
        wronskian = wronskian.max((j1 * h0 - j0 * h1 - target).norm() / target.norm());
    }

    // G on the ellipse equals the circle Gram matrix
    let contour = ellipse();
    let n = 160;
    let mesh = UniformMesh::new(&contour, n).unwrap();
    let g = gram_matrix(&mesh);
    let radius = contour.perimeter() / (2.0 * PI);
    let gc = circle_operator(cfie_fds::bem::OperatorKind::Gram, radius, n, None, QuadratureConfig::default())
        .unwrap()
        .to_dense();
    let gmax = g.max_abs();
    let mut gram_gap = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            gram_gap = gram_gap.max((g.entries[(i, j)] - gc[i][j]).norm() / gmax);
        }
    }

    // Gram row sums
    let h = mesh.spacing();
    let row_sum = (0..n)
        .map(|i| ((0..n).map(|j| g.entries[(i, j)]).sum::<c64>() - c64::new(h, 0.0)).norm() / h)
        .fold(0.0, f64::max);

    // circulant matvec vs dense
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let col: Vec<c64> = (0..64).map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let op = Circulant::from_first_column(&col).unwrap();
    let xv: Vec<c64> = (0..64).map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let fast = op.apply(&xv).unwrap();
    let slow: Vec<c64> = (0..64)
        .map(|i| (0..64).map(|j| col[(i + 64 - j) % 64] * xv[j]).sum())
        .collect();
    let num: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = slow.iter().map(|b| b.norm_sqr()).sum();
    let matvec = (num / den).sqrt();

    let woodbury = [(40, 4), (64, 10), (97, 7)]
        .iter()
        .map(|&(n, r)| woodbury_random_error(&mut rng, n, r))
        .fold(0.0, f64::max);

    let pass = wronskian <= 1e-10 && gram_gap <= 1e-14 && matvec <= 1e-12 && woodbury <= 1e-11 && row_sum <= 1e-14;
    report(
        9,
        pass,
        &format!(
            "wronskian={wronskian:.1e} (<=1e-10) G=Gc={gram_gap:.1e} (<=1e-14) matvec={matvec:.1e} (<=1e-12) woodbury={woodbury:.1e} (<=1e-11) rowsum={row_sum:.1e} (<=1e-14)"
        ),
    );
    assert!(pass);
}
