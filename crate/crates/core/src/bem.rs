//! Galerkin boundary element matrices with piecewise-linear hat functions.
//!
//! With `x` the test point, `y` the trial point, `Δ = x - y` and `d = |Δ|`:
//!
//! * single layer: `g = (i/4) H_0(κd)`;
//! * double layer: `∂g/∂n_y = (iκ/4) H_1(κd) (Δ·n_y) / d`;
//! * hypersingular, in integrated-by-parts form:
//!   `⟨λ_i, N λ_j⟩ = ∬ g [λ_i' λ_j' - κ² (t_x·t_y) λ_i λ_j]`,
//!   derivatives taken with respect to arclength.
//!
//! Elements are the exact curved arcs between consecutive nodes and the hat
//! functions are linear in arclength. On self and adjacent element pairs each
//! kernel is split as `A ln|s - s'| + B` with `A`, `B` smooth, and the
//! logarithmic part is integrated with a log-weighted Gauss rule after a
//! Duffy-type change of variables (see [`SingularRule`]).

use std::f64::consts::PI;

use faer::Mat;
use rayon::prelude::*;

use crate::geometry::{dot, norm, sub, CurveKind};
use crate::quadrature::{gauss_legendre, gauss_log};
use crate::specfun::{hankel_bessel_01, HankelTable};
use crate::{c64, Contour, Error, Result, UniformMesh, Wavenumber};

/// Quadrature orders used by the assembler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    /// Tensor Gauss–Legendre order on well-separated element pairs.
    pub regular: usize,
    /// Points of the log-weighted rule on self and adjacent pairs.
    pub log: usize,
    /// Gauss–Legendre order for the smooth directions of singular pairs.
    pub singular: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            regular: 8,
            log: 16,
            singular: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.regular == 0 || self.log == 0 || self.singular == 0 {
            return Err(Error::InvalidInput(format!(
                "quadrature orders must be positive, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    SingleLayer,
    DoubleLayer,
    Hypersingular,
    Gram,
}

/// Dense Galerkin matrix `[M]_ij = ⟨λ_i, Op λ_j⟩`.
#[derive(Debug, Clone)]
pub struct GalerkinMatrix {
    pub kind: OperatorKind,
    pub wavenumber: Option<Wavenumber>,
    pub spacing: f64,
    pub entries: Mat<c64>,
}

impl GalerkinMatrix {
    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `max |M - Mᵀ| / max |M|`.
    pub fn symmetry_residual(&self) -> f64 {
        let m = &self.entries;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
            }
        }
        worst / self.max_abs()
    }
}

pub(crate) fn max_abs(m: &Mat<c64>) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

/// Exact Gram matrix of the hat functions: `2h/3` on the diagonal, `h/6`
/// for neighbours (cyclically), zero elsewhere.
pub fn gram_matrix(mesh: &UniformMesh) -> GalerkinMatrix {
    let n = mesh.len();
    let h = mesh.spacing();
    let mut entries = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        entries[(i, i)] = c64::new(2.0 * h / 3.0, 0.0);
        entries[(i, (i + 1) % n)] = c64::new(h / 6.0, 0.0);
        entries[((i + 1) % n, i)] = c64::new(h / 6.0, 0.0);
    }
    GalerkinMatrix {
        kind: OperatorKind::Gram,
        wavenumber: None,
        spacing: h,
        entries,
    }
}

/// How a [`SingularNode`] enters the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeRole {
    /// Contributes `weight · A`, the log factor being in the weight.
    Log,
    /// Contributes `weight · (K - A ln(log_arg))`.
    Regular { log_arg: f64 },
}

/// Quadrature node on the unit square of local coordinates
/// (`test`, `trial`) of an element pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularNode {
    pub test: f64,
    pub trial: f64,
    pub weight: f64,
    pub role: NodeRole,
}

/// Which pair of elements a [`SingularRule`] integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    /// Test and trial element coincide.
    Same,
    /// Trial element follows the test element: shared node at test `ξ = 1`,
    /// trial `η = 0`.
    Next,
    /// Trial element precedes the test element: shared node at test `ξ = 0`,
    /// trial `η = 1`.
    Previous,
}

/// Product rule for `∫₀¹∫₀¹ [A ln|ξ - η| + B] dξ dη` on touching elements.
///
/// For `Contact::Same` the variables are `u = |ξ - η|` and `ξ`, so the
/// integrand is `ln(u)` times a smooth function of `u`. For adjacent
/// elements, with `a`, `b` the distances of the two points from the shared
/// node, each of the triangles `b ≤ a` and `a ≤ b` is mapped to polar-like
/// coordinates `(ρ, τ)` with Jacobian `ρ`, giving `ρ ln ρ` times a smooth
/// function. Weights exclude the factor `h²` of the arclength measure.
#[derive(Debug, Clone)]
pub struct SingularRule {
    pub contact: Contact,
    pub nodes: Vec<SingularNode>,
}

impl SingularRule {
    pub fn new(contact: Contact, config: &QuadratureConfig) -> Self {
        let gl = gauss_legendre::<f64>(config.singular);
        let lg = gauss_log::<f64>(config.log);
        let mut nodes = Vec::with_capacity(4 * config.singular * (config.log + config.singular));
        match contact {
            Contact::Same => {
                let mut push = |u: f64, w: f64, role: NodeRole| {
                    for (x, wx) in gl.iter() {
                        let len = 1.0 - u;
                        // η = ξ - u with ξ ∈ [u, 1], and η = ξ + u with ξ ∈ [0, 1 - u]
                        let xi = u + len * x;
                        nodes.push(SingularNode {
                            test: xi,
                            trial: xi - u,
                            weight: w * len * wx,
                            role,
                        });
                        let xi = len * x;
                        nodes.push(SingularNode {
                            test: xi,
                            trial: xi + u,
                            weight: w * len * wx,
                            role,
                        });
                    }
                };
                for (u, w) in lg.iter() {
                    push(u, -w, NodeRole::Log);
                }
                for (u, w) in gl.iter() {
                    push(u, w, NodeRole::Regular { log_arg: u });
                }
            }
            Contact::Next | Contact::Previous => {
                let map = |a: f64, b: f64| match contact {
                    Contact::Next => (1.0 - a, b),
                    _ => (a, 1.0 - b),
                };
                for (tau, wt) in gl.iter() {
                    let mut push = |rho: f64, w: f64, role: NodeRole| {
                        for (a, b) in [(rho, rho * tau), (rho * tau, rho)] {
                            let (test, trial) = map(a, b);
                            nodes.push(SingularNode {
                                test,
                                trial,
                                weight: w,
                                role,
                            });
                        }
                    };
                    for (rho, w) in lg.iter() {
                        push(rho, -w * wt * rho, NodeRole::Log);
                    }
                    for (rho, w) in gl.iter() {
                        push(rho, w * wt * rho, NodeRole::Regular { log_arg: rho });
                    }
                }
            }
        }
        Self { contact, nodes }
    }
}

const CHEB_DEGREE: usize = 16;

/// Local arclength fraction `σ ∈ [0, 1]` of an element to curve parameter.
#[derive(Debug, Clone)]
enum ParamMap {
    Linear { t0: f64, dt: f64 },
    Chebyshev { values: [f64; CHEB_DEGREE + 1] },
    Exact { s0: f64 },
}

fn cheb_node(j: usize) -> f64 {
    0.5 * (1.0 - (PI * j as f64 / CHEB_DEGREE as f64).cos())
}

fn cheb_eval(values: &[f64; CHEB_DEGREE + 1], sigma: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let diff = sigma - cheb_node(j);
        if diff == 0.0 {
            return v;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == CHEB_DEGREE {
            w *= 0.5;
        }
        num += w * v / diff;
        den += w / diff;
    }
    num / den
}

/// Quadrature point on an element; `sigma` is the local coordinate in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPoint {
    pub sigma: f64,
    pub weight: f64,
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
}

/// Point of an element with the data the kernels need.
#[derive(Debug, Clone, Copy)]
struct Site {
    t: f64,
    x: [f64; 2],
    tan: [f64; 2],
    nrm: [f64; 2],
}

/// The operators requested in one assembly pass, grouped by wavenumber so
/// each Hankel evaluation is shared.
#[derive(Debug, Clone)]
struct Plan {
    waves: Vec<c64>,
    tables: Vec<HankelTable<f64>>,
    ops: Vec<(OperatorKind, usize)>,
}

impl Plan {
    /// `max_distance` bounds every chord of the contour.
    fn new(requests: &[(OperatorKind, Wavenumber)], max_distance: f64) -> Result<Self> {
        let mut waves: Vec<c64> = Vec::new();
        let mut tables = Vec::new();
        let mut ops = Vec::with_capacity(requests.len());
        for &(kind, k) in requests {
            if kind == OperatorKind::Gram {
                return Err(Error::InvalidInput(
                    "the Gram matrix is exact; use gram_matrix".into(),
                ));
            }
            let v = k.value();
            let idx = match waves.iter().position(|w| *w == v) {
                Some(i) => i,
                None => {
                    waves.push(v);
                    tables.push(HankelTable::new(k, max_distance)?);
                    waves.len() - 1
                }
            };
            ops.push((kind, idx));
        }
        Ok(Self { waves, tables, ops })
    }
}

type Block = [[c64; 2]; 2];
const ZERO_BLOCK: Block = [[c64::new(0.0, 0.0); 2]; 2];

/// Galerkin assembler for one contour and mesh.
#[derive(Debug, Clone)]
pub struct Assembler<'a> {
    contour: &'a Contour,
    mesh: &'a UniformMesh,
    config: QuadratureConfig,
    maps: Vec<ParamMap>,
    regular_nodes: Vec<(f64, f64)>,
    regular_sites: Vec<Vec<Site>>,
    rules: [SingularRule; 3],
    displacement_rule: Vec<(f64, f64)>,
}

impl<'a> Assembler<'a> {
    pub fn new(contour: &'a Contour, mesh: &'a UniformMesh, config: QuadratureConfig) -> Result<Self> {
        config.validate()?;
        if (contour.perimeter() - mesh.perimeter()).abs() > 1e-12 * contour.perimeter() {
            return Err(Error::InvalidInput(
                "mesh was not built on this contour (perimeters differ)".into(),
            ));
        }
        let n = mesh.len();
        let h = mesh.spacing();
        let maps: Vec<ParamMap> = (0..n)
            .map(|e| Self::param_map(contour, mesh.element_start(e), h))
            .collect();
        let gl = gauss_legendre::<f64>(config.regular);
        let regular_nodes: Vec<(f64, f64)> = gl.iter().collect();
        let mut this = Self {
            contour,
            mesh,
            config,
            maps,
            regular_nodes,
            regular_sites: Vec::new(),
            rules: [
                SingularRule::new(Contact::Same, &config),
                SingularRule::new(Contact::Next, &config),
                SingularRule::new(Contact::Previous, &config),
            ],
            displacement_rule: gauss_legendre::<f64>(8).iter().collect(),
        };
        this.regular_sites = (0..n)
            .map(|e| {
                this.regular_nodes
                    .iter()
                    .map(|&(x, _)| this.site(e, x))
                    .collect()
            })
            .collect();
        Ok(this)
    }

    fn param_map(contour: &Contour, s0: f64, h: f64) -> ParamMap {
        let l = contour.perimeter();
        if let CurveKind::Circle { .. } = contour.kind() {
            return ParamMap::Linear {
                t0: s0 / l,
                dt: h / l,
            };
        }
        let mut values = [0.0; CHEB_DEGREE + 1];
        for (j, v) in values.iter_mut().enumerate() {
            *v = contour.param_at(s0 + h * cheb_node(j));
        }
        let ok = [0.13, 0.37, 0.61, 0.89].iter().all(|&sigma| {
            let exact = contour.param_at(s0 + h * sigma);
            (cheb_eval(&values, sigma) - exact).abs() <= 1e-15
        });
        if ok {
            ParamMap::Chebyshev { values }
        } else {
            ParamMap::Exact { s0 }
        }
    }

    pub fn contour(&self) -> &Contour {
        self.contour
    }

    pub fn mesh(&self) -> &UniformMesh {
        self.mesh
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// Regular Gauss points of element `e`; weights include the spacing.
    pub fn element_quadrature(&self, e: usize) -> Vec<ElementPoint> {
        let h = self.mesh.spacing();
        self.regular_nodes
            .iter()
            .zip(&self.regular_sites[e])
            .map(|(&(sigma, w), site)| ElementPoint {
                sigma,
                weight: w * h,
                position: site.x,
                tangent: site.tan,
                normal: site.nrm,
            })
            .collect()
    }

    fn param(&self, e: usize, sigma: f64) -> f64 {
        match &self.maps[e] {
            ParamMap::Linear { t0, dt } => t0 + dt * sigma,
            ParamMap::Chebyshev { values } => cheb_eval(values, sigma),
            ParamMap::Exact { s0 } => self.contour.param_at(s0 + self.mesh.spacing() * sigma),
        }
    }

    fn site(&self, e: usize, sigma: f64) -> Site {
        let t = self.param(e, sigma);
        let (x, d, _) = self.contour.kind().evaluate(t);
        let speed = norm(d);
        let tan = [d[0] / speed, d[1] / speed];
        Site {
            t,
            x,
            tan,
            nrm: [tan[1], -tan[0]],
        }
    }

    /// `x(tx) - x(ty)` as the integral of the parametric velocity, free of
    /// the cancellation that plain subtraction suffers for nearby points.
    fn displacement(&self, tx: f64, ty: f64) -> [f64; 2] {
        let ty = ty - (ty - tx).round();
        let len = tx - ty;
        let kind = self.contour.kind();
        let mut acc = [0.0, 0.0];
        for &(x, w) in &self.displacement_rule {
            let d = kind.evaluate(ty + len * x).1;
            acc[0] += w * d[0];
            acc[1] += w * d[1];
        }
        [acc[0] * len, acc[1] * len]
    }

    fn contact(&self, test: usize, trial: usize) -> Option<Contact> {
        let n = self.mesh.len();
        if test == trial {
            Some(Contact::Same)
        } else if trial == (test + 1) % n {
            Some(Contact::Next)
        } else if test == (trial + 1) % n {
            Some(Contact::Previous)
        } else {
            None
        }
    }

    /// Local 2×2 block `∫∫ K φ_p(test) φ_q(trial)` of one operator on one
    /// ordered element pair.
    pub fn element_pair_integral(
        &self,
        kind: OperatorKind,
        k: Option<Wavenumber>,
        test: usize,
        trial: usize,
    ) -> Result<[[c64; 2]; 2]> {
        let n = self.mesh.len();
        if test >= n || trial >= n {
            return Err(Error::InvalidInput(format!(
                "element pair ({test}, {trial}) outside a mesh of {n} elements"
            )));
        }
        if kind == OperatorKind::Gram {
            let h = self.mesh.spacing();
            return Ok(if test == trial {
                [
                    [c64::new(h / 3.0, 0.0), c64::new(h / 6.0, 0.0)],
                    [c64::new(h / 6.0, 0.0), c64::new(h / 3.0, 0.0)],
                ]
            } else {
                ZERO_BLOCK
            });
        }
        let k = k.ok_or_else(|| Error::InvalidInput(format!("{kind:?} needs a wavenumber")))?;
        let plan = self.plan(&[(kind, k)])?;
        Ok(self.pair_blocks(&plan, test, trial)?[0])
    }

    fn plan(&self, requests: &[(OperatorKind, Wavenumber)]) -> Result<Plan> {
        // a closed curve has no chord longer than half its perimeter
        Plan::new(requests, 0.5 * self.contour.perimeter())
    }

    fn pair_blocks(&self, plan: &Plan, test: usize, trial: usize) -> Result<Vec<Block>> {
        let blocks = match self.contact(test, trial) {
            Some(c) => self.singular_blocks(plan, c, test, trial)?,
            None => self.regular_blocks(plan, test, trial)?.0,
        };
        check_finite(&blocks, test, trial)?;
        Ok(blocks)
    }

    fn singular_blocks(&self, plan: &Plan, contact: Contact, test: usize, trial: usize) -> Result<Vec<Block>> {
        let rule = match contact {
            Contact::Same => &self.rules[0],
            Contact::Next => &self.rules[1],
            Contact::Previous => &self.rules[2],
        };
        let h = self.mesh.spacing();
        let dphi = [-1.0 / h, 1.0 / h];
        let mut out = vec![ZERO_BLOCK; plan.ops.len()];
        let mut g = vec![c64::new(0.0, 0.0); plan.waves.len()];
        let mut dg = g.clone();
        let mut ag = g.clone();
        let mut adg = g.clone();
        let quarter_i = c64::new(0.0, 0.25);
        for node in &rule.nodes {
            let x = self.site(test, node.test);
            let y = self.site(trial, node.trial);
            let delta = self.displacement(x.t, y.t);
            let d = norm(delta);
            if !(d > 0.0) {
                return Err(Error::Quadrature { test, trial });
            }
            let rho = dot(delta, y.nrm) / d;
            let tt = dot(x.tan, y.tan);
            for (w, &kappa) in plan.waves.iter().enumerate() {
                let z = kappa * d;
                let ([h0, h1], [j0, j1]) = hankel_bessel_01(z)?;
                g[w] = quarter_i * h0;
                dg[w] = quarter_i * kappa * h1 * rho;
                ag[w] = -j0 / (2.0 * PI);
                adg[w] = -kappa * j1 * rho / (2.0 * PI);
                if let NodeRole::Regular { log_arg } = node.role {
                    let l = log_arg.ln();
                    g[w] -= ag[w] * l;
                    dg[w] -= adg[w] * l;
                }
            }
            let (kg, kd) = match node.role {
                NodeRole::Log => (&ag, &adg),
                NodeRole::Regular { .. } => (&g, &dg),
            };
            let phi_x = [1.0 - node.test, node.test];
            let phi_y = [1.0 - node.trial, node.trial];
            for (block, &(kind, w)) in out.iter_mut().zip(&plan.ops) {
                let kappa = plan.waves[w];
                for p in 0..2 {
                    for q in 0..2 {
                        let pp = phi_x[p] * phi_y[q];
                        let v = match kind {
                            OperatorKind::SingleLayer => kg[w] * pp,
                            OperatorKind::DoubleLayer => kd[w] * pp,
                            OperatorKind::Hypersingular => {
                                kg[w] * (dphi[p] * dphi[q] - kappa * kappa * tt * pp)
                            }
                            OperatorKind::Gram => unreachable!(),
                        };
                        block[p][q] += v * node.weight;
                    }
                }
            }
        }
        let h2 = h * h;
        for block in &mut out {
            for row in block.iter_mut() {
                for v in row.iter_mut() {
                    *v *= h2;
                }
            }
        }
        Ok(out)
    }

    /// Tensor Gauss–Legendre blocks for the ordered pair (test, trial) and
    /// for the transposed pair (trial, test), sharing kernel evaluations.
    fn regular_blocks(&self, plan: &Plan, test: usize, trial: usize) -> Result<(Vec<Block>, Vec<Block>)> {
        let h = self.mesh.spacing();
        let dphi = [-1.0 / h, 1.0 / h];
        let nops = plan.ops.len();
        let mut ef = vec![ZERO_BLOCK; nops];
        let mut fe = vec![ZERO_BLOCK; nops];
        let nw = plan.waves.len();
        let mut g = vec![c64::new(0.0, 0.0); nw];
        let mut dg = g.clone();
        let mut dg_swap = g.clone();
        let quarter_i = c64::new(0.0, 0.25);
        let tiny = 1e-12 * h;
        for (m, x) in self.regular_sites[test].iter().enumerate() {
            let (sx, wx) = self.regular_nodes[m];
            let phi_x = [1.0 - sx, sx];
            for (nn, y) in self.regular_sites[trial].iter().enumerate() {
                let (sy, wy) = self.regular_nodes[nn];
                let phi_y = [1.0 - sy, sy];
                let delta = sub(x.x, y.x);
                let d = norm(delta);
                if !(d > tiny) {
                    return Err(Error::SelfIntersection { test, trial });
                }
                let rho = dot(delta, y.nrm) / d;
                let rho_swap = -dot(delta, x.nrm) / d;
                let tt = dot(x.tan, y.tan);
                for (w, (&kappa, table)) in plan.waves.iter().zip(&plan.tables).enumerate() {
                    let (h0, h1) = table.eval(d)?;
                    g[w] = quarter_i * h0;
                    let c = quarter_i * kappa * h1;
                    dg[w] = c * rho;
                    dg_swap[w] = c * rho_swap;
                }
                let weight = wx * wy;
                for (o, &(kind, w)) in plan.ops.iter().enumerate() {
                    let kappa = plan.waves[w];
                    for p in 0..2 {
                        for q in 0..2 {
                            let pp = phi_x[p] * phi_y[q] * weight;
                            match kind {
                                OperatorKind::SingleLayer => {
                                    let v = g[w] * pp;
                                    ef[o][p][q] += v;
                                    fe[o][q][p] += v;
                                }
                                OperatorKind::DoubleLayer => {
                                    ef[o][p][q] += dg[w] * pp;
                                    fe[o][q][p] += dg_swap[w] * pp;
                                }
                                OperatorKind::Hypersingular => {
                                    let v = g[w]
                                        * (dphi[p] * dphi[q] * weight - kappa * kappa * tt * pp);
                                    ef[o][p][q] += v;
                                    fe[o][q][p] += v;
                                }
                                OperatorKind::Gram => unreachable!(),
                            }
                        }
                    }
                }
            }
        }
        let h2 = h * h;
        for block in ef.iter_mut().chain(fe.iter_mut()) {
            for row in block.iter_mut() {
                for v in row.iter_mut() {
                    *v *= h2;
                }
            }
        }
        Ok((ef, fe))
    }

    pub fn assemble(&self, kind: OperatorKind, k: Option<Wavenumber>) -> Result<GalerkinMatrix> {
        if kind == OperatorKind::Gram {
            return Ok(gram_matrix(self.mesh));
        }
        let k = k.ok_or_else(|| Error::InvalidInput(format!("{kind:?} needs a wavenumber")))?;
        Ok(self.assemble_many(&[(kind, k)])?.pop().unwrap())
    }

    /// Assembles several operators in one sweep over element pairs; Hankel
    /// values are computed once per point pair and distinct wavenumber.
    pub fn assemble_many(&self, requests: &[(OperatorKind, Wavenumber)]) -> Result<Vec<GalerkinMatrix>> {
        let plan = self.plan(requests)?;
        let n = self.mesh.len();
        let mut mats: Vec<Mat<c64>> = plan.ops.iter().map(|_| Mat::zeros(n, n)).collect();

        let scatter = |mats: &mut Vec<Mat<c64>>, e: usize, f: usize, blocks: &[Block]| {
            let (e0, e1) = self.mesh.element_nodes(e);
            let (f0, f1) = self.mesh.element_nodes(f);
            let rows = [e0, e1];
            let cols = [f0, f1];
            for (m, b) in mats.iter_mut().zip(blocks) {
                for p in 0..2 {
                    for q in 0..2 {
                        m[(rows[p], cols[q])] += b[p][q];
                    }
                }
            }
        };

        let singular: Vec<Result<[(usize, Vec<Block>); 3]>> = (0..n)
            .into_par_iter()
            .map(|e| {
                let next = (e + 1) % n;
                let prev = (e + n - 1) % n;
                Ok([
                    (e, self.pair_blocks(&plan, e, e)?),
                    (next, self.pair_blocks(&plan, e, next)?),
                    (prev, self.pair_blocks(&plan, e, prev)?),
                ])
            })
            .collect();
        for (e, res) in singular.into_iter().enumerate() {
            for (f, blocks) in res? {
                scatter(&mut mats, e, f, &blocks);
            }
        }

        let chunk = (8 * rayon::current_num_threads()).max(16);
        let tests: Vec<usize> = (0..n).collect();
        for group in tests.chunks(chunk) {
            let results: Vec<Result<Vec<(usize, Vec<Block>, Vec<Block>)>>> = group
                .par_iter()
                .map(|&e| {
                    let last = if e == 0 { n - 1 } else { n };
                    ((e + 2)..last)
                        .map(|f| {
                            let (ef, fe) = self.regular_blocks(&plan, e, f)?;
                            check_finite(&ef, e, f)?;
                            check_finite(&fe, f, e)?;
                            Ok((f, ef, fe))
                        })
                        .collect()
                })
                .collect();
            for (&e, res) in group.iter().zip(results) {
                for (f, ef, fe) in res? {
                    scatter(&mut mats, e, f, &ef);
                    scatter(&mut mats, f, e, &fe);
                }
            }
        }

        let h = self.mesh.spacing();
        Ok(mats
            .into_iter()
            .zip(requests)
            .map(|(entries, &(kind, k))| GalerkinMatrix {
                kind,
                wavenumber: Some(k),
                spacing: h,
                entries,
            })
            .collect())
    }

    /// Row `i` of each requested operator, from the element pairs whose test
    /// element carries node `i`.
    pub fn assemble_row(&self, requests: &[(OperatorKind, Wavenumber)], row: usize) -> Result<Vec<Vec<c64>>> {
        let plan = self.plan(requests)?;
        let n = self.mesh.len();
        if row >= n {
            return Err(Error::DimensionMismatch { expected: n, got: row });
        }
        let mut out = vec![vec![c64::new(0.0, 0.0); n]; plan.ops.len()];
        // node `row` is local node 1 of element row-1 and local node 0 of element row
        for (e, p) in [((row + n - 1) % n, 1usize), (row, 0usize)] {
            let blocks: Vec<Result<(usize, Vec<Block>)>> = (0..n)
                .into_par_iter()
                .map(|f| Ok((f, self.pair_blocks(&plan, e, f)?)))
                .collect();
            for res in blocks {
                let (f, blocks) = res?;
                let (f0, f1) = self.mesh.element_nodes(f);
                for (r, b) in out.iter_mut().zip(&blocks) {
                    r[f0] += b[p][0];
                    r[f1] += b[p][1];
                }
            }
        }
        Ok(out)
    }
}

fn check_finite(blocks: &[Block], test: usize, trial: usize) -> Result<()> {
    let ok = blocks
        .iter()
        .flat_map(|b| b.iter().flatten())
        .all(|v| v.re.is_finite() && v.im.is_finite());
    if ok {
        Ok(())
    } else {
        Err(Error::Quadrature { test, trial })
    }
}
