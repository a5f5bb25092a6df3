mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

use config::{ExperimentConfig, Overrides};
use output::Output;

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cfie-fds", version, about = "Fast direct BEM solver for 2D TE scattering by PEC contours")]
struct Cli {
    #[arg(value_enum)]
    command: CommandName,
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// circle:R, ellipse:A,B or fourier:R0;a1,a2;b1,b2
    #[arg(long)]
    geometry: Option<String>,
    /// Wavenumber(s) in 1/m: a,b,c or start:stop:step.
    #[arg(long)]
    k: Option<String>,
    /// Points per wavelength.
    #[arg(long)]
    ppw: Option<f64>,
    /// Relative compression tolerance.
    #[arg(long)]
    eps: Option<f64>,
    /// Incidence angles in degrees: a,b,c or start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the randomized range finder.
    #[arg(long)]
    seed: Option<u64>,
    /// REGULAR or REGULAR,LOG,SINGULAR quadrature orders.
    #[arg(long)]
    quad_order: Option<String>,
    /// Largest accepted skeleton rank.
    #[arg(long)]
    r_max: Option<usize>,
    /// Worker thread cap.
    #[arg(long)]
    threads: Option<usize>,
    /// Write binary dumps of C and C_c (solve).
    #[arg(long)]
    dump: bool,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CommandName {
    /// Factorize once and sweep incidence angles: echo widths, far fields, currents.
    Solve,
    /// Fourier-ordered singular values of C and C - C_c.
    Spectrum,
    /// Ranks and errors against dense LU over a list of wavenumbers.
    RankSweep,
    /// Circle against the cylindrical-harmonic series.
    ValidateCircle,
    /// Wall-clock time of each setup phase and of the solves.
    Bench,
}

impl CommandName {
    fn as_str(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Spectrum => "spectrum",
            Self::RankSweep => "rank-sweep",
            Self::ValidateCircle => "validate-circle",
            Self::Bench => "bench",
        }
    }
}

enum Failure {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    cfg.apply(&Overrides {
        geometry: cli.geometry.clone(),
        k: cli.k.clone(),
        ppw: cli.ppw,
        eps: cli.eps,
        angles: cli.angles.clone(),
        out: cli.out.clone(),
        seed: cli.seed,
        quad_order: cli.quad_order.clone(),
        r_max: cli.r_max,
        threads: cli.threads,
        dump: cli.dump,
    })?;
    cfg.validate()?;
    if matches!(cli.command, CommandName::Solve | CommandName::RankSweep | CommandName::Bench) {
        cfg.require_angles()?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> std::result::Result<bool, Failure> {
    let cfg = resolve(cli).map_err(Failure::Config)?;
    execute(cli.command, &cfg).map_err(Failure::Run)
}

fn execute(command: CommandName, cfg: &ExperimentConfig) -> Result<bool> {
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
        faer::set_global_parallelism(faer::Par::rayon(t));
    }
    let mut out = Output::new(&cfg.out, cfg.to_json_line())?;
    let clock = Instant::now();
    let report = match command {
        CommandName::Solve => commands::solve(cfg, &mut out)?,
        CommandName::Spectrum => commands::spectrum(cfg, &mut out)?,
        CommandName::RankSweep => commands::rank_sweep(cfg, &mut out)?,
        CommandName::ValidateCircle => commands::validate_circle(cfg, &mut out)?,
        CommandName::Bench => commands::bench(cfg, &mut out)?,
    };
    let files: Vec<String> = out
        .written()
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();
    let summary = json!({
        "command": command.as_str(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "passed": report.passed,
        "elapsed_s": clock.elapsed().as_secs_f64(),
        "files": files,
        "results": report.results,
    });
    out.json("summary.json", &summary)?;
    Ok(report.passed)
}
