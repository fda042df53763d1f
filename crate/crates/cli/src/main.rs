use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpurify_core::extraction::{contracted_map, maximally_mixed, trajectory};

use qpurify_cli::config::{Axis, Config};
use qpurify_cli::output::{extract_report, sweep_csv, trajectory_csv};
use qpurify_cli::sweep::{analyze_point, measurement_at, model_at, run_sweep};
use qpurify_cli::validate::{report, run_all, run_criterion, ValidationOptions};
use qpurify_cli::CliError;

#[derive(Parser)]
#[command(name = "qpurify", version, about = "State extraction by repeated ancilla measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral analysis and extracted state at a single point.
    Extract(Common),
    /// Purity of the extracted state over the sweep grid (CSV).
    SweepPurity(Common),
    /// Extraction efficiency ln|lambda0/lambda1| over the sweep grid (CSV).
    SweepEfficiency(Common),
    /// Success probability and purity after N measurements (CSV).
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Run the acceptance suite.
    Validate {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u8>,
        #[arg(long)]
        workers: Option<usize>,
        /// Corrupt one Kraus coefficient; the channel checks must then fail.
        #[arg(long, hide = true)]
        corrupt_kraus: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    theta_over_pi: Option<f64>,
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    epsilon_tau: Option<f64>,
    #[arg(long = "kt-over-omega")]
    kt_over_omega: Option<f64>,
    #[arg(long)]
    omega_over_epsilon: Option<f64>,
    #[arg(long)]
    gamma2_over_epsilon: Option<f64>,
    #[arg(long)]
    gamma1_over_gamma2: Option<f64>,
    /// Switch off the bath (gamma1 = gamma2 = 0).
    #[arg(long)]
    ideal: bool,
}

impl Common {
    /// File values first, then flags. A point flag also pins the matching
    /// sweep axis.
    fn load(&self) -> Result<Config, CliError> {
        let mut cfg = match &self.config {
            Some(p) => Config::from_file(p)?,
            None => Config::default(),
        };
        let m = &mut cfg.model;
        if let Some(v) = self.omega_over_epsilon {
            m.omega_over_epsilon = v;
        }
        if let Some(v) = self.gamma2_over_epsilon {
            m.gamma2_over_epsilon = v;
        }
        if let Some(v) = self.gamma1_over_gamma2 {
            m.gamma1_over_gamma2 = v;
        }
        if self.ideal {
            m.ideal = true;
        }
        if let Some(v) = self.kt_over_omega {
            m.kt_over_omega = v;
            cfg.sweep.kt_over_omega = Some(Axis::fixed(v));
        }
        if let Some(v) = self.epsilon_tau {
            cfg.epsilon_tau = v;
            cfg.sweep.epsilon_tau = Some(Axis::fixed(v));
        }
        if let Some(v) = self.theta_over_pi {
            cfg.theta_over_pi = v;
            cfg.sweep.theta_over_pi = Some(Axis::fixed(v));
        }
        if let Some(v) = self.chi {
            cfg.chi = v;
            cfg.sweep.chi = Some(Axis::fixed(v));
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract(common) => {
            let cfg = common.load()?;
            let pt = cfg.point();
            let res = analyze_point(&cfg.model, &pt)?;
            emit(cfg.out.as_deref(), &extract_report(&cfg, &pt, &res))
        }
        Command::SweepPurity(common) | Command::SweepEfficiency(common) => {
            let cfg = common.load()?;
            let rows = run_sweep(&cfg)?;
            emit(cfg.out.as_deref(), &sweep_csv(&rows))
        }
        Command::Trajectory { common, n_max } => {
            let mut cfg = common.load()?;
            if let Some(n) = n_max {
                cfg.n_max = n;
                cfg.validate()?;
            }
            let pt = cfg.point();
            let p = model_at(&cfg.model, pt.kt_over_omega)?;
            let map = contracted_map(&p, &measurement_at(&pt)?)?;
            let traj = trajectory(&map, &maximally_mixed(), cfg.n_max)?;
            emit(cfg.out.as_deref(), &trajectory_csv(&traj))
        }
        Command::Validate { only, workers, corrupt_kraus } => {
            let opts = ValidationOptions { corrupt_kraus, workers };
            let outcomes = match only {
                Some(id) => vec![run_criterion(id, &opts).ok_or_else(|| {
                    qpurify_cli::config::ConfigError::Invalid(format!("no criterion numbered {id}"))
                })?],
                None => run_all(&opts),
            };
            print!("{}", report(&outcomes));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                Err(CliError::Validation { failed })
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
