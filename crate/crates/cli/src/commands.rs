use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use faer::prelude::*;
use faer::Mat;
use serde_json::{json, Value};

use cfie_fds::bem::Assembler;
use cfie_fds::circulant::CircleOperators;
use cfie_fds::dump::{self, DumpKind};
use cfie_fds::physics::{
    echo_width_db, fourier_ordered_spectrum, numerical_rank, singular_values, CircleSeries, PlaneWave,
    SpectralComponent, SurfaceCurrentSolution, SurfaceQuadrature,
};
use cfie_fds::solver::FastDirectSolver;
use cfie_fds::system::PreconditionedSystem;
use cfie_fds::{c64, Contour, UniformMesh, Wavenumber};

use crate::config::{ExperimentConfig, GeometrySpec};
use crate::output::{num, Output};

/// Largest accepted relative L² error of `validate-circle`.
pub const CIRCLE_TOLERANCE: f64 = 0.02;

/// Outcome of one command: summary payload and whether its checks held.
pub struct Report {
    pub results: Value,
    pub passed: bool,
}

impl Report {
    fn ok(results: Value) -> Self {
        Self { results, passed: true }
    }
}

fn single_k(cfg: &ExperimentConfig, command: &str) -> Result<f64> {
    match cfg.wavenumbers().as_slice() {
        [k] => Ok(*k),
        ks => bail!("config field `k`: `{command}` takes one wavenumber, got {}", ks.len()),
    }
}

struct Problem {
    contour: Contour,
    mesh: UniformMesh,
}

impl Problem {
    fn new(cfg: &ExperimentConfig, contour: Contour, k: f64) -> Result<Self> {
        let n = cfg.nodes(&contour, k);
        let mesh = UniformMesh::new(&contour, n).context("geometry")?;
        Ok(Self { contour, mesh })
    }

    fn n(&self) -> usize {
        self.mesh.len()
    }

    fn quadrature(&self, cfg: &ExperimentConfig) -> Result<SurfaceQuadrature> {
        let asm = Assembler::new(&self.contour, &self.mesh, cfg.system().quadrature).context("bem")?;
        Ok(SurfaceQuadrature::new(&asm))
    }

    /// Right-hand sides, one column per incidence angle.
    fn rhs(&self, cfg: &ExperimentConfig, sys: &PreconditionedSystem) -> Result<Mat<c64>> {
        let quad = self.quadrature(cfg)?;
        let waves: Vec<PlaneWave> = cfg.angles_deg.iter().map(|a| PlaneWave::new(a.to_radians())).collect();
        let (e, h) = quad.project_excitation(sys.k, sys.impedance, &waves);
        sys.rhs_many(e.as_ref(), h.as_ref()).context("system")
    }

    fn setup(&self, cfg: &ExperimentConfig, k: f64, dense: bool) -> Result<FastDirectSolver> {
        FastDirectSolver::setup(&self.contour, &self.mesh, k, &cfg.system(), &cfg.skeleton(), dense).context("solver setup")
    }
}

fn column(m: &Mat<c64>, j: usize) -> Vec<c64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

fn relative_columns(x: &Mat<c64>, reference: &Mat<c64>) -> Vec<f64> {
    (0..x.ncols())
        .map(|j| (x.col(j) - reference.col(j)).norm_l2() / reference.col(j).norm_l2())
        .collect()
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|e| e * e).sum::<f64>() / v.len() as f64).sqrt()
}

/// Factorize once, then sweep the incidence angles.
pub fn solve(cfg: &ExperimentConfig, out: &mut Output) -> Result<Report> {
    cfg.require_angles()?;
    let k = single_k(cfg, "solve")?;
    let p = Problem::new(cfg, cfg.geometry.contour()?, k)?;
    let mut fast = p.setup(cfg, k, false)?;
    let b = p.rhs(cfg, &fast.system)?;
    let clock = Instant::now();
    let x = fast.solver.solve_many(b.as_ref()).context("solve")?;
    let solve_s = clock.elapsed().as_secs_f64();
    let r = fast.system.apply(x.as_ref()).context("system")? - &b;
    let residuals: Vec<f64> = (0..b.ncols()).map(|j| r.col(j).norm_l2() / b.col(j).norm_l2()).collect();

    let quad = p.quadrature(cfg)?;
    let mut solve_rows = Vec::new();
    let mut far_rows = Vec::new();
    let mut current_rows = Vec::new();
    for (j, &angle) in cfg.angles_deg.iter().enumerate() {
        let xj = column(&x, j);
        // backscatter direction
        let f = quad.far_field(k, &xj, &[angle.to_radians() + PI]).context("physics")?[0];
        let ew = echo_width_db(f);
        solve_rows.push(vec![num(angle), num(ew), num(residuals[j])]);
        far_rows.push(vec![num(angle), num(f.re), num(f.im), num(ew)]);
        let sol = SurfaceCurrentSolution {
            arclengths: p.mesh.arclengths().to_vec(),
            coefficients: xj,
        };
        for (s, jt) in sol.arclengths.iter().zip(sol.surface_current()) {
            current_rows.push(vec![num(angle), num(*s), num(jt.re), num(jt.im)]);
        }
    }
    out.csv("solve.csv", &["angle_deg", "echo_width_dbm", "residual"], &solve_rows)?;
    out.csv("far_field.csv", &["angle_deg", "re", "im", "echo_width_dbm"], &far_rows)?;
    out.csv("currents.csv", &["angle_deg", "s", "re", "im"], &current_rows)?;
    let retained: Vec<Vec<String>> = fast
        .skeleton
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, s)| vec![i.to_string(), num(*s)])
        .collect();
    out.csv("retained_spectrum.csv", &["index", "sigma"], &retained)?;

    if cfg.dump {
        let kc = c64::new(k, 0.0);
        let c = fast.system.form_dense().context("system")?;
        dump::write_matrix(out.binary("C.bin")?, DumpKind::System, kc, c.as_ref())?;
        let rows = fast.extraction.to_dense();
        let n = p.n();
        let cc = Mat::from_fn(n, n, |i, j| rows[i][j]);
        dump::write_matrix(out.binary("Cc.bin")?, DumpKind::CircleSystem, kc, cc.as_ref())?;
    }

    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok(Report::ok(json!({
        "k": k,
        "n": p.n(),
        "rank": fast.rank(),
        "core_condition": fast.solver.core_condition(),
        "max_residual": worst,
        "timings_s": timings_json(&fast),
        "solve_s": solve_s,
        "per_rhs_ms": 1e3 * solve_s / cfg.angles_deg.len() as f64,
    })))
}

fn timings_json(fast: &FastDirectSolver) -> Value {
    let t = fast.timings;
    json!({
        "assembly": t.assembly,
        "circulant": t.circulant,
        "compression": t.compression,
        "factorization": t.factorization,
    })
}

/// Rows `(mode_index, sigma_C, sigma_CminusCc)`: within each mode the
/// values of both spectra are listed in decreasing order side by side, and a
/// missing entry is left empty.
fn spectrum_rows(a: &[SpectralComponent], b: &[SpectralComponent], n: usize) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for m in 0..=n / 2 {
        let sa: Vec<f64> = a.iter().filter(|c| c.mode == m).map(|c| c.sigma).collect();
        let sb: Vec<f64> = b.iter().filter(|c| c.mode == m).map(|c| c.sigma).collect();
        for i in 0..sa.len().max(sb.len()) {
            let cell = |v: &[f64]| v.get(i).map(|s| num(*s)).unwrap_or_default();
            rows.push(vec![m.to_string(), cell(&sa), cell(&sb)]);
        }
    }
    rows
}

pub fn spectrum(cfg: &ExperimentConfig, out: &mut Output) -> Result<Report> {
    let k = single_k(cfg, "spectrum")?;
    let p = Problem::new(cfg, cfg.geometry.contour()?, k)?;
    let n = p.n();
    let mut sys = PreconditionedSystem::assemble(&p.contour, &p.mesh, k, &cfg.system()).context("system")?;
    let radius = p.mesh.perimeter() / (2.0 * PI);
    let circle = CircleOperators::assemble(
        radius,
        n,
        Wavenumber::real(k).context("specfun")?,
        sys.k_tilde,
        cfg.system().quadrature,
    )
    .context("circulant")?;
    let cc = circle.compose().context("circulant")?;
    let c = sys.form_dense().context("system")?;
    let rows = cc.to_dense();
    let diff = Mat::from_fn(n, n, |i, j| c[(i, j)] - rows[i][j]);
    let spec_c = fourier_ordered_spectrum(c.as_ref()).context("physics")?;
    let spec_d = fourier_ordered_spectrum(diff.as_ref()).context("physics")?;
    out.csv(
        "spectrum.csv",
        &["mode_index", "sigma_C", "sigma_CminusCc"],
        &spectrum_rows(&spec_c, &spec_d, n),
    )?;
    let mut w = out.commented("cc_symbol.csv")?;
    cc.write_symbol_csv(&mut w).context("circulant")?;
    std::io::Write::flush(&mut w)?;

    let sv_c = singular_values(c.as_ref()).context("physics")?;
    let sv_d = singular_values(diff.as_ref()).context("physics")?;
    let peak = spec_c.iter().max_by(|a, b| a.sigma.total_cmp(&b.sigma)).map(|s| s.mode);
    Ok(Report::ok(json!({
        "k": k,
        "n": n,
        "k_tilde": [sys.k_tilde.value().re, sys.k_tilde.value().im],
        "peak_mode_C": peak,
        "rank_C": numerical_rank(&sv_c, cfg.eps),
        "rank_CminusCc": numerical_rank(&sv_d, cfg.eps),
    })))
}

/// Least-squares slope of `log r` against `log k`.
fn growth_exponent(ks: &[f64], ranks: &[usize]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(ranks)
        .filter(|(_, &r)| r > 0)
        .map(|(k, &r)| (k.ln(), (r as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn rank_sweep(cfg: &ExperimentConfig, out: &mut Output) -> Result<Report> {
    cfg.require_angles()?;
    let contour = cfg.geometry.contour()?;
    let ks = cfg.wavenumbers();
    let mut rows = Vec::new();
    let mut ranks = Vec::new();
    let mut entries = Vec::new();
    for &k in &ks {
        let p = Problem::new(cfg, contour.clone(), k)?;
        let clock = Instant::now();
        let fast = p.setup(cfg, k, true)?;
        let setup_s = clock.elapsed().as_secs_f64();
        let b = p.rhs(cfg, &fast.system)?;
        let clock = Instant::now();
        let x = fast.solver.solve_many(b.as_ref()).context("solve")?;
        let per_rhs_ms = 1e3 * clock.elapsed().as_secs_f64() / b.ncols() as f64;
        let c = fast.system.dense().context("dense system missing")?;
        let xd: Mat<c64> = c.partial_piv_lu().solve(&b);
        let err = rms(&relative_columns(&x, &xd));
        log::info!("k = {k}: N = {}, rank = {}, rel err = {err:e}", p.n(), fast.rank());
        rows.push(vec![num(k), p.n().to_string(), fast.rank().to_string(), num(err), num(setup_s), num(per_rhs_ms)]);
        ranks.push(fast.rank());
        entries.push(json!({
            "k": k,
            "n": p.n(),
            "rank": fast.rank(),
            "rel_err_vs_dense": err,
            "timings_s": timings_json(&fast),
        }));
    }
    out.csv(
        "rank_sweep.csv",
        &["k", "N", "rank", "rel_err_vs_dense", "setup_s", "per_rhs_ms"],
        &rows,
    )?;
    Ok(Report::ok(json!({
        "runs": entries,
        "rank_growth_exponent": growth_exponent(&ks, &ranks),
    })))
}

/// Circle of the configured radius (1 m unless the geometry is a circle)
/// against the cylindrical-harmonic series.
pub fn validate_circle(cfg: &ExperimentConfig, out: &mut Output) -> Result<Report> {
    let radius = match cfg.geometry {
        GeometrySpec::Circle { radius } => radius,
        _ => 1.0,
    };
    let contour = Contour::circle(radius).context("geometry")?;
    let incidence = cfg.angles_deg.first().copied().unwrap_or(0.0).to_radians();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut passed = true;
    let angles: Vec<f64> = (0..360).map(|d| (d as f64).to_radians()).collect();
    for k in cfg.wavenumbers() {
        let p = Problem::new(cfg, contour.clone(), k)?;
        let fast = p.setup(cfg, k, false)?;
        let quad = p.quadrature(cfg)?;
        let (e, h) = quad.project_excitation(k, fast.system.impedance, &[PlaneWave::new(incidence)]);
        let b = fast.system.rhs_many(e.as_ref(), h.as_ref()).context("system")?;
        let x = fast.solver.solve_many(b.as_ref()).context("solve")?;
        let sol = SurfaceCurrentSolution {
            arclengths: p.mesh.arclengths().to_vec(),
            coefficients: column(&x, 0),
        };
        let series = CircleSeries::new(radius, k).context("physics")?;
        let reference = |s: f64| series.surface_current(incidence, s / radius);
        let l2 = sol.relative_l2_error(contour.perimeter(), reference, 16);
        let nodal = sol.relative_nodal_error(reference);
        let far = quad.far_field(k, &sol.coefficients, &angles).context("physics")?;
        let exact: Vec<c64> = angles.iter().map(|&phi| series.far_field(incidence, phi)).collect();
        let scale = exact.iter().map(|f| f.norm()).fold(0.0, f64::max);
        let far_err = far.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        passed &= l2 <= CIRCLE_TOLERANCE;
        rows.push(vec![num(k), p.n().to_string(), num(cfg.ppw), num(l2), num(nodal), num(far_err)]);
        entries.push(json!({"k": k, "n": p.n(), "rank": fast.rank(), "l2_error": l2, "nodal_error": nodal, "far_field_error": far_err}));
        println!("k = {k}: N = {}, relative L2 current error = {l2:.4e} (tolerance {CIRCLE_TOLERANCE})", p.n());
    }
    out.csv(
        "validate_circle.csv",
        &["k", "N", "ppw", "l2_error", "nodal_error", "far_field_error"],
        &rows,
    )?;
    Ok(Report {
        results: json!({"radius": radius, "tolerance": CIRCLE_TOLERANCE, "runs": entries}),
        passed,
    })
}

pub fn bench(cfg: &ExperimentConfig, out: &mut Output) -> Result<Report> {
    cfg.require_angles()?;
    let contour = cfg.geometry.contour()?;
    let mut rows = Vec::new();
    for k in cfg.wavenumbers() {
        let p = Problem::new(cfg, contour.clone(), k)?;
        let fast = p.setup(cfg, k, false)?;
        let b = p.rhs(cfg, &fast.system)?;
        let clock = Instant::now();
        let x = fast.solver.solve_many(b.as_ref()).context("solve")?;
        let solve_s = clock.elapsed().as_secs_f64();
        std::hint::black_box(&x);
        let t = fast.timings;
        let phases = [
            ("assembly", t.assembly),
            ("circulant", t.circulant),
            ("compression", t.compression),
            ("factorization", t.factorization),
            ("solve_all", solve_s),
            ("solve_per_rhs", solve_s / b.ncols() as f64),
        ];
        for (name, s) in phases {
            rows.push(vec![num(k), p.n().to_string(), fast.rank().to_string(), name.to_string(), num(s)]);
            println!("k = {k:>6} N = {:>6} rank = {:>5} {name:<14} {s:>12.6} s", p.n(), fast.rank());
        }
    }
    out.csv("bench.csv", &["k", "N", "rank", "phase", "seconds"], &rows)?;
    Ok(Report::ok(json!({"rows": rows.len()})))
}
