//! Experiment configuration: JSON file, then flag overrides, then checks.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cfie_fds::bem::QuadratureConfig;
use cfie_fds::compression::SkeletonConfig;
use cfie_fds::geometry::{CurveKind, RadiusAveraging};
use cfie_fds::system::SystemConfig;
use cfie_fds::{Contour, FREE_SPACE_IMPEDANCE};

pub const MIN_PPW: f64 = 5.0;
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometrySpec {
    Circle {
        radius: f64,
    },
    Ellipse {
        semi_x: f64,
        semi_y: f64,
    },
    /// `r(θ) = mean_radius + Σ cos[n-1] cos nθ + sin[n-1] sin nθ`.
    Fourier {
        mean_radius: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl GeometrySpec {
    /// `circle:R`, `ellipse:A,B` or `fourier:R0;a1,a2,..;b1,b2,..`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, args) = text.split_once(':').unwrap_or((text, ""));
        let numbers = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().with_context(|| format!("bad number {t:?} in --geometry")))
                .collect()
        };
        match kind.trim() {
            "circle" => match numbers(args)?.as_slice() {
                [r] => Ok(Self::Circle { radius: *r }),
                _ => bail!("--geometry circle expects one radius, e.g. circle:1"),
            },
            "ellipse" => match numbers(args)?.as_slice() {
                [a, b] => Ok(Self::Ellipse { semi_x: *a, semi_y: *b }),
                _ => bail!("--geometry ellipse expects two semi-axes, e.g. ellipse:2,1"),
            },
            "fourier" => {
                let mut parts = args.split(';');
                let r0 = numbers(parts.next().unwrap_or(""))?;
                let [mean_radius] = r0.as_slice() else {
                    bail!("--geometry fourier expects a mean radius, e.g. fourier:1;0.1;0.05")
                };
                Ok(Self::Fourier {
                    mean_radius: *mean_radius,
                    cos: numbers(parts.next().unwrap_or(""))?,
                    sin: numbers(parts.next().unwrap_or(""))?,
                })
            }
            other => bail!("unknown geometry kind {other:?} (circle, ellipse or fourier)"),
        }
    }

    pub fn contour(&self) -> Result<Contour> {
        let kind = match self.clone() {
            Self::Circle { radius } => CurveKind::Circle { radius },
            Self::Ellipse { semi_x, semi_y } => CurveKind::Ellipse { semi_x, semi_y },
            Self::Fourier { mean_radius, cos, sin } => CurveKind::Fourier { mean_radius, cos, sin },
        };
        Contour::new(kind).context("geometry")
    }
}

/// A single number or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::One(x) => vec![*x],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    EquivalentCircle,
    MeanRadiusOfCurvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    pub regular: usize,
    pub log: usize,
    pub singular: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometrySpec,
    /// Wavenumber(s) in 1/m.
    pub k: OneOrMany,
    pub ppw: f64,
    pub eps: f64,
    pub r_max: Option<usize>,
    pub quadrature: Quadrature,
    pub averaging: Averaging,
    /// Incidence angles in degrees.
    pub angles_deg: Vec<f64>,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
    /// Also write binary dumps of `C` and `C_c` (solve only).
    pub dump: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            geometry: GeometrySpec::Ellipse { semi_x: 2.0, semi_y: 1.0 },
            k: OneOrMany::One(20.0),
            ppw: 10.0,
            eps: 0.015,
            r_max: None,
            quadrature: Quadrature {
                regular: q.regular,
                log: q.log,
                singular: q.singular,
            },
            averaging: Averaging::EquivalentCircle,
            angles_deg: (0..36).map(|i| 10.0 * i as f64).collect(),
            out: PathBuf::from("out"),
            seed: SkeletonConfig::default().seed,
            threads: None,
            dump: false,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub geometry: Option<String>,
    pub k: Option<String>,
    pub ppw: Option<f64>,
    pub eps: Option<f64>,
    pub angles: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quad_order: Option<String>,
    pub r_max: Option<usize>,
    pub threads: Option<usize>,
    pub dump: bool,
}

/// `a,b,c` or `start:stop:step` (stop excluded); empty means no values.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |t: &str| -> Result<f64> {
        t.trim()
            .parse::<f64>()
            .with_context(|| format!("bad number {t:?} in {what}"))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, s] = parts.as_slice() else {
            bail!("{what} range must be start:stop:step, got {text:?}");
        };
        let (a, b, s) = (num(a)?, num(b)?, num(s)?);
        if !(s > 0.0) {
            bail!("{what} range step must be positive");
        }
        let count = ((b - a) / s - 1e-9).ceil().max(0.0) as usize;
        return Ok((0..count).map(|i| a + s * i as f64).collect());
    }
    text.split(',').map(num).collect()
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| {
            anyhow::anyhow!(
                "{}:{}:{}: invalid config: {e}",
                path.display(),
                e.line(),
                e.column()
            )
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(g) = &o.geometry {
            self.geometry = GeometrySpec::parse(g)?;
        }
        if let Some(k) = &o.k {
            self.k = OneOrMany::Many(parse_list(k, "--k")?);
        }
        if let Some(p) = o.ppw {
            self.ppw = p;
        }
        if let Some(e) = o.eps {
            self.eps = e;
        }
        if let Some(a) = &o.angles {
            self.angles_deg = parse_list(a, "--angles")?;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(q) = &o.quad_order {
            let orders: Vec<usize> = q
                .split(',')
                .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad --quad-order {q:?}")))
                .collect::<Result<_>>()?;
            match orders.as_slice() {
                [r] => self.quadrature.regular = *r,
                [r, l, s] => {
                    self.quadrature = Quadrature {
                        regular: *r,
                        log: *l,
                        singular: *s,
                    }
                }
                _ => bail!("--quad-order takes REGULAR or REGULAR,LOG,SINGULAR"),
            }
        }
        if o.r_max.is_some() {
            self.r_max = o.r_max;
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
        self.dump |= o.dump;
        Ok(())
    }

    /// Checks that hold for every command.
    pub fn validate(&self) -> Result<()> {
        let ks = self.k.values();
        if ks.is_empty() {
            bail!("config field `k`: at least one wavenumber is required");
        }
        if let Some(k) = ks.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            bail!("config field `k`: wavenumbers must be positive, got {k}");
        }
        if !(self.ppw >= MIN_PPW) {
            bail!("config field `ppw`: must be at least {MIN_PPW}, got {}", self.ppw);
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            bail!("config field `eps`: must lie in (0, 1), got {}", self.eps);
        }
        let q = self.quadrature;
        if q.regular == 0 || q.log == 0 || q.singular == 0 {
            bail!("config field `quadrature`: orders must be positive");
        }
        if self.threads == Some(0) {
            bail!("config field `threads`: must be positive");
        }
        let contour = self.geometry.contour()?;
        for &k in &ks {
            let n = self.nodes(&contour, k);
            if n < MIN_NODES {
                bail!("k = {k}, ppw = {} gives N = {n} nodes; at least {MIN_NODES} are required", self.ppw);
            }
        }
        Ok(())
    }

    pub fn require_angles(&self) -> Result<()> {
        if self.angles_deg.is_empty() {
            bail!("config field `angles_deg`: the angle list is empty");
        }
        if let Some(a) = self.angles_deg.iter().find(|a| !a.is_finite()) {
            bail!("config field `angles_deg`: non-finite angle {a}");
        }
        Ok(())
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.k.values()
    }

    pub fn nodes(&self, contour: &Contour, k: f64) -> usize {
        (self.ppw * contour.perimeter() * k / (2.0 * std::f64::consts::PI)).round() as usize
    }

    pub fn system(&self) -> SystemConfig {
        SystemConfig {
            quadrature: QuadratureConfig {
                regular: self.quadrature.regular,
                log: self.quadrature.log,
                singular: self.quadrature.singular,
            },
            averaging: match self.averaging {
                Averaging::EquivalentCircle => RadiusAveraging::EquivalentCircle,
                Averaging::MeanRadiusOfCurvature => RadiusAveraging::MeanRadiusOfCurvature,
            },
            impedance: FREE_SPACE_IMPEDANCE,
        }
    }

    pub fn skeleton(&self) -> SkeletonConfig {
        SkeletonConfig {
            eps: self.eps,
            seed: self.seed,
            max_rank: self.r_max,
            ..SkeletonConfig::default()
        }
    }

    /// Single-line JSON of the resolved config.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
