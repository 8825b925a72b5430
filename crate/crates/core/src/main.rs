use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptre_core::config::{load_config, threads_from_text};
use ptre_core::sweep::{run_point, run_sweep, summarize, write_csv, SweepConfig};
use ptre_core::tls::{analytic_limit_tau_z, LimitKind};
use ptre_core::validate::run_suite;
use ptre_core::{PtreError, Result};

/// Steady-state polaron-transformed Redfield engine model.
#[derive(Parser)]
#[command(name = "ptre", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Phonon coupling α (overrides the config)
    #[arg(long)]
    alpha: Option<f64>,
    /// Phonon inverse temperature β_v (overrides the config)
    #[arg(long = "beta-v")]
    beta_v: Option<f64>,
    /// Relative tolerance of the rate integrals
    #[arg(long = "quad-rel-tol")]
    quad_rel_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point and print it as key=value lines
    Point(Common),
    /// Run the configured grid and write CSV
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Output CSV path (overrides `out` in the config; stdout if neither)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads
        #[arg(long, env = "PTRE_THREADS")]
        threads: Option<usize>,
    },
    /// Print closed-form reference values for the configuration
    Limits(Common),
    /// Run the oracle suite
    Validate(Common),
}

fn load(common: &Common) -> Result<SweepConfig> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p)?,
        None => SweepConfig::default(),
    };
    if let Some(a) = common.alpha {
        cfg.phonon = cfg.phonon.with_alpha(a)?;
        cfg.alpha_grid = vec![a];
    }
    if let Some(b) = common.beta_v {
        cfg.phonon = cfg.phonon.with_beta_v(b)?;
        cfg.beta_v_grid.clear();
    }
    if let Some(t) = common.quad_rel_tol {
        cfg.quadrature.rel_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn config_threads(common: &Common) -> Result<Option<usize>> {
    match &common.config {
        Some(p) => threads_from_text(&std::fs::read_to_string(p)?),
        None => Ok(None),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Point(common) => {
            let cfg = load(&common)?;
            let row = run_point(&cfg, cfg.phonon.alpha(), cfg.phonon.beta_v());
            print!("{}", row.to_key_values());
            Ok(row.flags.iter().all(|f| !f.starts_with("error")))
        }
        Command::Sweep {
            common,
            out,
            threads,
        } => {
            let mut cfg = load(&common)?;
            if out.is_some() {
                cfg.out = out;
            }
            let threads = match threads {
                Some(t) => t,
                None => config_threads(&common)?
                    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            };
            let sink: Box<dyn std::io::Write> =
                match &cfg.out {
                    Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
                        PtreError::Io(format!("cannot write {}: {e}", p.display()))
                    })?)),
                    None => Box::new(std::io::stdout().lock()),
                };
            let rows = run_sweep(&cfg, threads)?;
            write_csv(&cfg, &rows, sink)?;
            let s = summarize(&rows);
            eprintln!(
                "{} rows ({} flagged)",
                s.clean_rows + s.flagged_rows,
                s.flagged_rows
            );
            if let Some((a, e)) = s.eta_min {
                eprintln!("eta minimum {e:.6} at alpha = {a:.4e}");
            }
            Ok(true)
        }
        Command::Limits(common) => {
            let cfg = load(&common)?;
            let (sys, bath) = (&cfg.system, &cfg.phonon);
            println!("eta0={}", sys.eta0());
            println!("kappa={}", bath.kappa());
            println!(
                "tau_z_weak={}",
                analytic_limit_tau_z(sys, bath, LimitKind::Weak)
            );
            println!(
                "tau_z_polaron={}",
                analytic_limit_tau_z(sys, bath, LimitKind::Polaron)
            );
            println!(
                "tau_z_strong={}",
                analytic_limit_tau_z(sys, bath, LimitKind::Strong)
            );
            println!("n_p={}", cfg.pump.n);
            println!("n_t={}", cfg.trap.n);
            Ok(true)
        }
        Command::Validate(common) => {
            let cfg = load(&common)?;
            let mut ok = true;
            for c in run_suite(&cfg) {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                ok &= c.passed;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e @ PtreError::Config(_)) => {
            eprintln!("error: {e}");
            eprintln!("usage: ptre <point|sweep|limits|validate> [--config PATH] [--alpha X] [--beta-v X] [--out PATH] [--threads N] [--quad-rel-tol X]");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
