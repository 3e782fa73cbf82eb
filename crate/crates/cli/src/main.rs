use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gmink::continuity::{run_measure_continuity, run_p_continuity};
use gmink::gaussian::{lp_surface_measure, minkowski_gap};
use gmink::io::{self, BodyFile, ExperimentConfig, MeasureFile, ReportFile};
use gmink::solver::{solve_discrete, verify_solution, Initialization, JacobianKind, SolverConfig};
use gmink::{Error, GaussianBody, GaussianContext, Polytope, Result, SphericalGrid};

#[derive(Parser, Debug)]
#[command(name = "gmink", version, about = "L_p Gaussian surface measures and the discrete L_p Gaussian Minkowski problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Expected dimension of the inputs (2 or 3).
    #[arg(long)]
    dim: Option<usize>,
    /// Resolution of the working sphere grid.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Writes the L_p Gaussian surface measure of a body.
    Measure {
        body: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Prints the Gaussian volume of a body.
    Volume {
        body: PathBuf,
        /// Digits after the decimal point.
        #[arg(long, default_value_t = 6)]
        digits: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Solves for the body whose L_p Gaussian surface measure is the input.
    Solve {
        measure: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Residual tolerance on the largest atom-mass error.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
        /// Radius of the starting ball.
        #[arg(long, default_value_t = 3.0)]
        init_radius: f64,
        /// Use closed-form planar Jacobians.
        #[arg(long)]
        analytic_jacobian: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recomputes the measure of a reported solution and compares.
    Verify {
        report: PathBuf,
        measure: PathBuf,
        /// Exponent; defaults to the one stored in the report.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Prints the Minkowski-type inequality gap for two bodies.
    Inequality {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Measure-continuity experiment.
    Continuity {
        config: PathBuf,
        /// Output directory for records.csv and summary.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exponent-continuity experiment.
    Pcontinuity {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

fn context(dim: usize, common: &Common) -> Result<GaussianContext<f64>> {
    if let Some(expected) = common.dim {
        if expected != dim {
            return Err(Error::DimensionMismatch { left: expected, right: dim });
        }
    }
    let grid = match common.resolution {
        Some(r) => SphericalGrid::new(dim, r)?,
        None => SphericalGrid::default_for(dim)?,
    };
    GaussianContext::with_grid(grid)
}

fn read_body(path: &Path) -> Result<Polytope<f64>> {
    io::read_json::<BodyFile>(path)?.to_polytope()
}

fn emit<S: serde::Serialize>(out: Option<&Path>, value: &S) -> Result<()> {
    match out {
        Some(path) => io::write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Measure { body, p, out, common } => {
            let body = read_body(&body)?;
            let ctx = context(body.dim(), &common)?;
            let mu = lp_surface_measure(&ctx, &body, p)?;
            emit(out.as_deref(), &MeasureFile::from_measure(&mu))
        }
        Command::Volume { body, digits, common } => {
            let body = read_body(&body)?;
            let ctx = context(body.dim(), &common)?;
            println!("{:.*}", digits, body.gaussian_volume(&ctx)?);
            Ok(())
        }
        Command::Solve { measure, p, tol, max_iterations, init_radius, analytic_jacobian, out, common } => {
            let mu = io::read_json::<MeasureFile>(&measure)?.to_measure()?;
            let ctx = context(mu.dim(), &common)?;
            let cfg = SolverConfig {
                residual_tol: tol,
                max_iterations,
                initialization: Initialization::LargeBall { radius: init_radius },
                jacobian: if analytic_jacobian { JacobianKind::N2Analytic } else { JacobianKind::FiniteDifference },
                ..SolverConfig::default()
            };
            let report = solve_discrete(&ctx, &mu, p, &cfg)?;
            emit(out.as_deref(), &ReportFile::from_report(&report, p))
        }
        Command::Verify { report, measure, p, common } => {
            let file = io::read_json::<ReportFile>(&report)?;
            let mu = io::read_json::<MeasureFile>(&measure)?.to_measure()?;
            let ctx = context(mu.dim(), &common)?;
            let p = p.unwrap_or(file.p);
            let summary = verify_solution(&ctx, &file.to_report()?, &mu, p)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "max_deviation": summary.max_deviation,
                    "total_variation": summary.total_variation,
                    "gauss_volume": summary.gauss_volume,
                    "volume_ok": summary.volume_ok,
                }))?
            );
            if !summary.volume_ok {
                return Err(Error::BranchViolation { gauss_volume: summary.gauss_volume });
            }
            Ok(())
        }
        Command::Inequality { k, l, p, common } => {
            let k = read_body(&k)?;
            let l = read_body(&l)?;
            let ctx = context(k.dim(), &common)?;
            println!("{:e}", minkowski_gap(&ctx, &k, &l, p)?);
            Ok(())
        }
        Command::Continuity { config, out, seed, tol, common } => {
            let cfg_file: ExperimentConfig = io::read_json(&config)?;
            let (ctx, k0, solver) = experiment_setup(&cfg_file, &common, tol)?;
            let seed = seed.unwrap_or(cfg_file.seed);
            let records = run_measure_continuity(&ctx, &k0, cfg_file.p, &cfg_file.schedule, &solver, seed)?;
            write_experiment(&out, &records)
        }
        Command::Pcontinuity { config, out, tol, common } => {
            let cfg_file: ExperimentConfig = io::read_json(&config)?;
            let (ctx, k0, solver) = experiment_setup(&cfg_file, &common, tol)?;
            let records = run_p_continuity(&ctx, &k0, cfg_file.p, &cfg_file.schedule, &solver)?;
            write_experiment(&out, &records)
        }
    }
}

type Setup = (GaussianContext<f64>, Polytope<f64>, SolverConfig<f64>);

fn experiment_setup(cfg: &ExperimentConfig, common: &Common, tol: Option<f64>) -> Result<Setup> {
    let k0: Polytope<f64> = cfg.body.to_polytope()?;
    let common = Common { resolution: common.resolution.or(cfg.resolution), ..common.clone() };
    let ctx = context(k0.dim(), &common)?;
    let mut solver = SolverConfig::default();
    if let Some(t) = tol.or(cfg.residual_tol) {
        solver.residual_tol = t;
    }
    if cfg.analytic_jacobian {
        solver.jacobian = JacobianKind::N2Analytic;
    }
    Ok((ctx, k0, solver))
}

fn write_experiment(out: &Path, records: &[gmink::continuity::ExperimentRecord<f64>]) -> Result<()> {
    std::fs::create_dir_all(out)?;
    io::emit_report(records, &out.join("records.csv"), &out.join("summary.json"))
}

fn configure_threads() {
    if let Some(n) = std::env::var("GMINK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // a second initialisation only fails if a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmink: {e}");
            if e.is_domain() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
